#include "tailbound/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tailbound/errors.hpp"

namespace tailbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

BoundParams::BoundParams(double sigma_, double y_, double eps_)
    : sigma(sigma_), y(y_), eps(eps_) {
  if (!positive_finite(sigma)) throw DomainError("BoundParams: sigma must be positive");
  if (!positive_finite(y)) throw DomainError("BoundParams: y must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("BoundParams: eps must lie in (0, 1)");
}

MixtureRV::MixtureRV(double v_, double y_, double theta_) : v(v_), y(y_), theta(theta_) {
  if (!(std::isfinite(v) && v >= 0.0)) throw DomainError("MixtureRV: v must be nonnegative");
  if (!positive_finite(y)) throw DomainError("MixtureRV: y must be positive");
  if (!(std::isfinite(theta) && theta >= 0.0))
    throw DomainError("MixtureRV: theta must be nonnegative");
  if (v == 0.0 && theta == 0.0) throw DomainError("MixtureRV: degenerate law");
}

MixtureRV MixtureRV::from(const BoundParams& p) {
  const double s2 = p.sigma * p.sigma;
  return MixtureRV((1.0 - p.eps) * s2, p.y, p.eps * s2 / (p.y * p.y));
}

MixtureRV MixtureRV::poisson(double y, double theta) { return MixtureRV(0.0, y, theta); }

MixtureRV MixtureRV::gaussian(double v) { return MixtureRV(v, 1.0, 0.0); }

double MixtureRV::stddev() const { return std::sqrt(variance()); }

TwoPointRV::TwoPointRV(double a_, double b_) : a(a_), b(b_) {
  if (!positive_finite(a) || !positive_finite(b))
    throw DomainError("TwoPointRV: a and b must be positive");
}

double TwoPointRV::stddev() const { return std::sqrt(a * b); }

double Law::stddev() const {
  return std::visit([](const auto& r) { return r.stddev(); }, rv);
}

double Law::sup() const {
  if (const auto* t = std::get_if<TwoPointRV>(&rv)) return location + t->b;
  return kInf;
}

double Law::atom_at_sup() const {
  if (const auto* t = std::get_if<TwoPointRV>(&rv)) return t->prob_high();
  return 0.0;
}

Complex mixture_log_mgf(const MixtureRV& rv, Complex z) {
  if (!(z.real() * rv.y <= 700.0)) throw RangeError("mixture_mgf: Re(z) * y exceeds 700");
  return 0.5 * rv.v * z * z + rv.theta * exp_remainder(1, z * rv.y);
}

Complex mixture_mgf(const MixtureRV& rv, Complex z) { return std::exp(mixture_log_mgf(rv, z)); }

double mixture_tail(const MixtureRV& rv, double x, const Tolerance& tol) {
  if (std::isnan(x)) throw DomainError("mixture_tail: NaN threshold");
  if (x == -kInf) return 1.0;
  if (x == kInf) return 0.0;
  if (rv.theta == 0.0) return normal_tail(rv.v, x);
  if (rv.v == 0.0) return poisson_tail(rv.theta, snap_to_lattice(x / rv.y + rv.theta));
  double sum = 0.0;
  const long kmax = static_cast<long>(rv.theta + 60.0 * std::sqrt(rv.theta) + 2000.0);
  for (long k = 0; k <= kmax; ++k) {
    const double lp = poisson_log_pmf(rv.theta, k);
    const double pk = std::exp(lp);
    sum += pk * normal_tail(rv.v, x - rv.y * (static_cast<double>(k) - rv.theta));
    const double kd = static_cast<double>(k);
    if (kd + 2.0 > rv.theta) {
      // P(Pois > k) <= pmf(k + 1) / (1 - theta / (k + 2))
      const double next = std::exp(poisson_log_pmf(rv.theta, k + 1));
      const double rest = next / (1.0 - rv.theta / (kd + 2.0));
      if (rest < tol.abs || rest <= 1e-3 * tol.rel * sum) return std::min(sum, 1.0);
    }
  }
  throw NumericalError("mixture_tail: Poisson series did not terminate");
}

double two_point_palpha_closed(const TwoPointRV& rv, double alpha, double x) {
  if (!(alpha > 1.0)) throw DomainError("two_point_palpha_closed: alpha must exceed 1");
  if (std::isnan(x)) throw DomainError("two_point_palpha_closed: NaN threshold");
  const double a = rv.a;
  const double b = rv.b;
  if (x <= 0.0) return 1.0;
  if (x >= b) return x == b ? a / (a + b) : 0.0;
  const double k = 1.0 / (alpha - 1.0);
  const double l1 = k * (std::log(b) + alpha * std::log(x + a));
  const double l2 = k * (std::log(a) + alpha * std::log(b - x));
  const double hi = std::max(l1, l2);
  const double lse = hi + std::log(std::exp(l1 - hi) + std::exp(l2 - hi));
  const double lognum = (alpha - 1.0) * std::log(a + b) + std::log(a) + std::log(b);
  return std::min(1.0, std::exp(lognum - (alpha - 1.0) * lse));
}

double two_point_pinf_closed(const TwoPointRV& rv, double x) {
  if (std::isnan(x)) throw DomainError("two_point_pinf_closed: NaN threshold");
  const double a = rv.a;
  const double b = rv.b;
  if (x <= 0.0) return 1.0;
  if (x >= b) return x == b ? a / (a + b) : 0.0;
  const double e = -((x + a) / (a + b)) * std::log1p(x / a) - ((b - x) / (a + b)) * std::log1p(-x / b);
  return std::min(1.0, std::exp(e));
}

}  // namespace tailbound
