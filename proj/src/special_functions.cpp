#include "tailbound/special_functions.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "tailbound/errors.hpp"

namespace tailbound {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite argument");
}

// Halley iteration on g(w) = w + ln w - L, for L > 1.
double lambert_from_log(double L) {
  double w = L - std::log(L);
  for (int it = 0; it < 100; ++it) {
    const double g = w + std::log(w) - L;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double dw = (g / g1) / (1.0 - g * g2 / (2.0 * g1 * g1));
    w -= dw;
    if (std::abs(dw) <= 1e-15 * w) break;
  }
  return w;
}

}  // namespace

void Tolerance::validate() const {
  if (!(rel > 0.0 && rel < 1.0)) throw DomainError("Tolerance: rel must lie in (0, 1)");
  if (!(abs > 0.0 && abs < 1.0)) throw DomainError("Tolerance: abs must lie in (0, 1)");
  if (max_iter < 1) throw DomainError("Tolerance: max_iter must be positive");
}

double lambert_w0(double z) {
  require_finite(z, "lambert_w0");
  if (z < 0.0) throw DomainError("lambert_w0: negative argument");
  if (z == 0.0) return 0.0;
  if (z > std::exp(1.0)) return lambert_from_log(std::log(z));
  double w;
  if (z < 0.25) {
    w = z * (1.0 - z);
  } else {
    const double l = std::log1p(z);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    const double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::abs(dw) <= 1e-14 * std::abs(w)) break;
  }
  return w;
}

double lambert_w0_log(double log_z) {
  require_finite(log_z, "lambert_w0_log");
  if (log_z <= 1.0) return lambert_w0(std::exp(log_z));
  return lambert_from_log(log_z);
}

double bennett_psi(double u) {
  require_finite(u, "bennett_psi");
  if (u <= -1.0) throw DomainError("bennett_psi: argument must exceed -1");
  if (std::abs(u) < 1e-4) {
    // sum_{k >= 2} (-1)^k u^k / (k (k - 1))
    const double u2 = u * u;
    return u2 * (0.5 - u / 6.0 + u2 / 12.0 - u2 * u / 20.0 + u2 * u2 / 30.0);
  }
  return (1.0 + u) * std::log1p(u) - u;
}

double poisson_log_pmf(double theta, long k) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (theta == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return kd * std::log(theta) - theta - std::lgamma(kd + 1.0);
}

double poisson_tail(double theta, double u) {
  require_finite(theta, "poisson_tail");
  if (std::isnan(u)) throw DomainError("poisson_tail: NaN threshold");
  if (theta < 0.0) throw DomainError("poisson_tail: negative rate");
  if (u <= 0.0) return 1.0;
  if (theta == 0.0 || u == std::numeric_limits<double>::infinity()) return 0.0;
  // P(Pois(theta) >= n) equals the regularized lower incomplete gamma P(n, theta).
  return boost::math::gamma_p(std::ceil(u), theta);
}

double normal_pdf(double z) {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double std_normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_tail(double v, double x) {
  require_finite(v, "normal_tail");
  if (std::isnan(x)) throw DomainError("normal_tail: NaN threshold");
  if (v < 0.0) throw DomainError("normal_tail: negative variance");
  if (v == 0.0) return x <= 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(x / std::sqrt(2.0 * v));
}

Complex exp_remainder(int j, Complex u) {
  if (j < -1 || j > 3) throw DomainError("exp_remainder: order must lie in {-1, ..., 3}");
  if (j == -1) return std::exp(u);
  if (std::abs(u) < 1.0) {
    // Taylor series from order j + 1 avoids cancellation.
    Complex term = 1.0;
    for (int m = 1; m <= j + 1; ++m) term *= u / static_cast<double>(m);
    Complex sum = term;
    for (int m = j + 2; m < j + 40; ++m) {
      term *= u / static_cast<double>(m);
      sum += term;
      if (std::abs(term) <= kEps * 0.25 * std::abs(sum)) break;
    }
    return sum;
  }
  Complex poly = 0.0;
  Complex term = 1.0;
  for (int m = 0; m <= j; ++m) {
    poly += term;
    term *= u / static_cast<double>(m + 1);
  }
  return std::exp(u) - poly;
}

double exp_remainder(int j, double u) { return exp_remainder(j, Complex(u, 0.0)).real(); }

double snap_to_lattice(double u) {
  const double r = std::nearbyint(u);
  if (std::abs(u - r) <= 64.0 * kEps * std::max(1.0, std::abs(u))) return r;
  return u;
}

}  // namespace tailbound
