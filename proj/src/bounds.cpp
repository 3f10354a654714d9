#include "tailbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailbound/errors.hpp"
#include "tailbound/numerics.hpp"

namespace tailbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

// log of Gamma(a + 1) (e / a)^a, with the a = 0 value 0.
double log_c0(double a) { return a == 0.0 ? 0.0 : std::lgamma(a + 1.0) + a * (1.0 - std::log(a)); }

double pu_log_objective(const BoundParams& p, double lambda, double x) {
  const double s2 = p.sigma * p.sigma;
  return -lambda * x + 0.5 * lambda * lambda * (1.0 - p.eps) * s2 +
         exp_remainder(1, lambda * p.y) * p.eps * s2 / (p.y * p.y);
}

}  // namespace

TailBoundResult bh(double sigma, double y, double x) {
  require_positive(sigma, "bh: sigma");
  require_positive(y, "bh: y");
  require_finite(x, "bh: x");
  if (x <= 0.0) return {1.0, 0.0, BoundMethod::trivial, 0.0};
  const double s2 = sigma * sigma;
  const double u = x * y / s2;
  return {std::exp(-(s2 / (y * y)) * bennett_psi(u)), std::log1p(u) / y, BoundMethod::closed_form, 0.0};
}

double bh_exp(double sigma, double y, double lambda) {
  require_positive(sigma, "bh_exp: sigma");
  require_positive(y, "bh_exp: y");
  if (!(lambda >= 0.0)) throw DomainError("bh_exp: lambda must be nonnegative");
  if (lambda * y > 700.0) throw RangeError("bh_exp: lambda * y exceeds 700");
  return std::exp(exp_remainder(1, lambda * y) * sigma * sigma / (y * y));
}

double pu_exp(const BoundParams& p, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("pu_exp: lambda must be nonnegative");
  if (lambda * p.y > 700.0) throw RangeError("pu_exp: lambda * y exceeds 700");
  return std::exp(pu_log_objective(p, lambda, 0.0));
}

TailBoundResult pu(const BoundParams& p, double x) {
  require_finite(x, "pu: x");
  if (x <= 0.0) return {1.0, 0.0, BoundMethod::trivial, 0.0};
  const double s2 = p.sigma * p.sigma;
  const double e = p.eps;
  const double A = e + x * p.y / s2;
  const double w = lambert_w0_log(std::log(e / (1.0 - e)) + A / (1.0 - e));
  const double u = std::log(w) + std::log((1.0 - e) / e);  // lambda_x * y
  const double expo = ((1.0 - u) * ((1.0 - e) * (w + 1.0) + A) - (1.0 + e)) * s2 / (2.0 * p.y * p.y);
  return {std::exp(std::min(expo, 0.0)), u / p.y, BoundMethod::closed_form, 0.0};
}

TailBoundResult pu_numeric(const BoundParams& p, double x) {
  require_finite(x, "pu_numeric: x");
  if (x <= 0.0) return {1.0, 0.0, BoundMethod::trivial, 0.0};
  const double s2 = p.sigma * p.sigma;
  auto deriv = [&](double lambda) {
    return -x + lambda * (1.0 - p.eps) * s2 + std::expm1(lambda * p.y) * p.eps * s2 / p.y;
  };
  // Each term of the derivative alone reaches x at these points.
  const double hi = std::min(x / ((1.0 - p.eps) * s2), std::log1p(x * p.y / (p.eps * s2)) / p.y);
  if (!(deriv(hi) >= 0.0)) throw NumericalError("pu_numeric: bracket failure");
  const double lambda = numerics::find_root(deriv, 0.0, hi, 1e-15);
  return {std::exp(std::min(pu_log_objective(p, lambda, x), 0.0)), lambda, BoundMethod::minimization, 0.0};
}

double m_function(const Law& law, double alpha, double t, PosMomentMethod method, const Tolerance& tol) {
  if (!(alpha > 1.0)) throw DomainError("m_function: alpha must exceed 1");
  require_finite(t, "m_function: t");
  if (t >= law.sup()) throw DomainError("m_function: t must lie below the support maximum");
  const double num = pos_moment(law, t, alpha, method, tol);
  const double den = pos_moment(law, t, alpha - 1.0, method, tol);
  if (!(den > tol.abs)) throw NumericalError("m_function: vanishing denominator", den);
  return t + num / den;
}

double solve_t_x(const Law& law, double alpha, double x, PosMomentMethod method, const Tolerance& tol) {
  if (!(alpha > 1.0)) throw DomainError("solve_t_x: alpha must exceed 1");
  require_finite(x, "solve_t_x: x");
  if (!(x > law.mean() && x < law.sup()))
    throw DomainError("solve_t_x: x must lie strictly between the mean and the support maximum");
  auto g = [&](double t) { return m_function(law, alpha, t, method, tol) - x; };
  const double sd = law.stddev();
  const double hi = x - 1e-12 * std::max(1.0, std::abs(x));
  double offset = 4.0 * sd;
  double lo = x - offset;
  int expansions = 0;
  while (g(lo) >= 0.0) {
    if (++expansions > 60) throw NumericalError("solve_t_x: bracket expansion failed");
    offset *= 2.0;
    lo = x - offset;
  }
  if (g(hi) <= 0.0) return hi;
  return numerics::find_root(g, lo, hi, 1e-14);
}

TailBoundResult p_alpha(const Law& law, double alpha, double x, PosMomentMethod method, const Tolerance& tol) {
  if (!(alpha > 1.0)) throw DomainError("p_alpha: alpha must exceed 1");
  if (std::isnan(x)) throw DomainError("p_alpha: NaN threshold");
  if (x <= law.mean()) return {1.0, -kInf, BoundMethod::trivial, 0.0};
  const double sup = law.sup();
  if (x >= sup) return {x == sup ? law.atom_at_sup() : 0.0, sup, BoundMethod::atom, 0.0};
  const double t = solve_t_x(law, alpha, x, method, tol);
  const double ea = pos_moment(law, t, alpha, method, tol);
  const double ea1 = pos_moment(law, t, alpha - 1.0, method, tol);
  const double value = ea / std::pow(x - t, alpha);
  const double diag = std::exp(alpha * std::log(ea1) - (alpha - 1.0) * std::log(ea));
  return {std::min(value, 1.0), t, BoundMethod::root_solve, std::abs(value - diag)};
}

TailBoundResult be(double sigma, double y, double x, PosMomentMethod method, const Tolerance& tol) {
  require_positive(sigma, "be: sigma");
  require_positive(y, "be: y");
  require_finite(x, "be: x");
  if (x <= 0.0) return {1.0, -kInf, BoundMethod::trivial, 0.0};
  return p_alpha(Law(MixtureRV::poisson(y, sigma * sigma / (y * y))), 2.0, x, method, tol);
}

TailBoundResult be(const BoundParams& p, double x, PosMomentMethod method, const Tolerance& tol) {
  return be(p.sigma, p.y, x, method, tol);
}

TailBoundResult pin(const BoundParams& p, double x, PosMomentMethod method, const Tolerance& tol) {
  require_finite(x, "pin: x");
  if (x <= 0.0) return {1.0, -kInf, BoundMethod::trivial, 0.0};
  return p_alpha(Law(MixtureRV::from(p)), 3.0, x, method, tol);
}

double ca(double sigma, double x) {
  require_positive(sigma, "ca: sigma");
  if (std::isnan(x)) throw DomainError("ca: NaN threshold");
  if (x <= 0.0) return 1.0;
  return sigma * sigma / (sigma * sigma + x * x);
}

double en(double sigma, double x) {
  require_positive(sigma, "en: sigma");
  if (std::isnan(x)) throw DomainError("en: NaN threshold");
  if (x <= 0.0) return 1.0;
  return std::exp(-0.5 * x * x / (sigma * sigma));
}

double c_const(double alpha, double beta) {
  require_positive(alpha, "c_const: alpha");
  if (!(beta >= 0.0)) throw DomainError("c_const: beta must be nonnegative");
  if (beta > alpha) throw DomainError("c_const: beta must not exceed alpha");
  return std::exp(log_c0(alpha) - log_c0(beta));
}

double plc_poisson_tail(double theta, double u) {
  require_positive(theta, "plc_poisson_tail: theta");
  if (std::isnan(u)) throw DomainError("plc_poisson_tail: NaN threshold");
  u = snap_to_lattice(u);
  if (u <= 0.0) return 1.0;
  const double j = std::ceil(u - 1.0);
  if (u == j + 1.0) return poisson_tail(theta, u);
  const double lo = poisson_tail(theta, j);
  const double hi = poisson_tail(theta, j + 1.0);
  if (hi == 0.0) return 0.0;
  return std::exp((j + 1.0 - u) * std::log(lo) + (u - j) * std::log(hi));
}

double plc_scaled_poisson(double theta, double y, double z) {
  require_positive(y, "plc_scaled_poisson: y");
  return plc_poisson_tail(theta, z / y + theta);
}

double plc_mixture_upper(const BoundParams& p, double x, const Tolerance& tol) {
  require_finite(x, "plc_mixture_upper: x");
  const double s2 = p.sigma * p.sigma;
  const double v = (1.0 - p.eps) * s2;
  const double theta = p.eps * s2 / (p.y * p.y);
  const double sd = std::sqrt(v);
  const double lo = x - 10.0 * sd;
  const double hi = x + 10.0 * sd;
  std::vector<double> cuts{lo};
  const double k_first = std::max(0.0, std::ceil(lo / p.y + theta));
  for (double k = k_first; p.y * (k - theta) < hi; k += 1.0) {
    const double z = p.y * (k - theta);
    if (z > lo) cuts.push_back(z);
  }
  cuts.push_back(hi);
  auto integrand = [&](double z) {
    const double d = (x - z) / sd;
    return plc_scaled_poisson(theta, p.y, z) * normal_pdf(d) / sd;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += numerics::integrate(integrand, cuts[i], cuts[i + 1], tol.rel, tol.abs).value;
  return std::min(total, 1.0);
}

double lc3_bound(const BoundParams& p, double x, const Tolerance& tol) {
  return std::min(1.0, c_const(3.0, 0.0) * plc_mixture_upper(p, x, tol));
}

EffectiveEpsilon effective_epsilon(const std::vector<SummandBudget>& summands, double y) {
  require_positive(y, "effective_epsilon: y");
  if (summands.empty()) throw DomainError("effective_epsilon: empty summand list");
  EffectiveEpsilon r;
  double s2 = 0.0;
  double beta = 0.0;
  for (const auto& s : summands) {
    require_positive(s.sigma_i, "effective_epsilon: sigma_i");
    require_positive(s.y_i, "effective_epsilon: y_i");
    if (!(s.beta_i >= 0.0)) throw DomainError("effective_epsilon: beta_i must be nonnegative");
    if (s.y_i > y) throw DomainError("effective_epsilon: y_i exceeds y");
    s2 += s.sigma_i * s.sigma_i;
    if (s.y_i > s.sigma_i) beta += s.beta_i;
    if (s.beta_i > s.sigma_i * s.sigma_i * y) r.budget_warning = true;
  }
  r.sigma = std::sqrt(s2);
  r.eps_tilde = beta / (s2 * y);
  r.degenerate = !(r.eps_tilde > 0.0 && r.eps_tilde < 1.0);
  return r;
}

TailBoundResult ea(double x) {
  if (!(std::isfinite(x) && x > 0.0)) throw DomainError("ea: x must be positive");
  auto log_ratio = [x](double t) {
    return std::log(2.0 * gaussian_pos_moment(1.0, -t, 3)) - 3.0 * std::log(x - t);
  };
  const auto m = numerics::minimize(log_ratio, 0.0, x * (1.0 - 1e-9));
  return {std::min(1.0, std::exp(m.value)), m.x, BoundMethod::minimization, 0.0};
}

double alpha_x_split(const BoundParams& p, double x) {
  if (!(std::isfinite(x) && x > 0.0)) throw DomainError("alpha_x_split: x must be positive");
  const double s2 = p.sigma * p.sigma;
  auto neg_lhs = [&](double a) {
    return -((1.0 - a) * x * x / ((1.0 - p.eps) * s2) - (x / p.y) * std::log1p(a * x * p.y / (p.eps * s2)));
  };
  return numerics::bisect_increasing(neg_lhs, 0.0, 1.0);
}

double split_product(const BoundParams& p, double x, double alpha) {
  const double s2 = p.sigma * p.sigma;
  return en(std::sqrt((1.0 - p.eps) * s2), (1.0 - alpha) * x) *
         bh(std::sqrt(p.eps * s2), p.y, alpha * x).value;
}

}  // namespace tailbound
