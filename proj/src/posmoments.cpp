#include "tailbound/posmoments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailbound/errors.hpp"
#include "tailbound/numerics.hpp"

namespace tailbound {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_small_integer(double alpha, int lo, int hi) {
  return alpha == std::floor(alpha) && alpha >= lo && alpha <= hi;
}

// E|N(0, v)|^alpha
double gaussian_abs_moment(double v, double alpha) {
  return std::pow(2.0 * v, 0.5 * alpha) * std::tgamma(0.5 * (alpha + 1.0)) / std::sqrt(kPi);
}

// Stops a Poisson-weighted sum of nonnegative terms g(k) = pmf(k) h(mu_k), with
// mu_k = y (k - theta) - w and h(mu) <= C (floor + mu^alpha) for mu > 0.
// Returns true when the remaining terms are certified below the target.
bool poisson_sum_done(double theta, double y, double w, double alpha, long k, double floor_term,
                      double coeff, double sum, const Tolerance& tol) {
  const double kd = static_cast<double>(k);
  const double mu_next = y * (kd + 1.0 - theta) - w;
  if (mu_next <= 0.0 || kd + 2.0 <= theta) return false;
  const double ratio = theta / (kd + 2.0) * std::pow(1.0 + y / mu_next, alpha);
  if (ratio >= 1.0) return false;
  const double pmf_next = std::exp(poisson_log_pmf(theta, k + 1));
  const double rest = pmf_next * coeff * (floor_term + std::pow(mu_next, alpha)) / (1.0 - ratio);
  return rest <= std::max(tol.abs, 1e-3 * tol.rel * sum);
}

Complex ipow(double q) {
  // i^q on the principal branch.
  return {std::cos(0.5 * kPi * q), std::sin(0.5 * kPi * q)};
}

int panel_count(double width, double frequency) {
  const double n = std::ceil(width * std::max(frequency, 1e-3) / (2.0 * kPi)) + 1.0;
  return static_cast<int>(std::min(n, 20000.0));
}

// Bound on int_T^inf M exp(-v t^2 / 2) t^{-(p+1)} dt.
double envelope_tail(double M, double v, double p, double T) {
  double b = M * std::pow(T, -p) / p;
  if (v > 0.0) {
    const double g = M * std::pow(T, -(p + 1.0)) * std::sqrt(kPi / (2.0 * v)) *
                     std::erfc(T * std::sqrt(0.5 * v));
    b = std::min(b, g);
  }
  return b;
}

double clamp_result(double value, double err, const Tolerance& tol, const char* who) {
  if (value >= 0.0) return value;
  if (value >= -std::max(tol.abs, err)) return 0.0;
  throw NumericalError(std::string(who) + ": negative result beyond round-off", err);
}

}  // namespace

double gaussian_pos_moment(double v, double mu, int n) {
  if (n < 0) throw DomainError("gaussian_pos_moment: negative order");
  if (!(v >= 0.0)) throw DomainError("gaussian_pos_moment: negative variance");
  if (v == 0.0) return mu > 0.0 ? std::pow(mu, n) : 0.0;
  const double s = std::sqrt(v);
  const double a = -mu / s;
  // I_k = E(Z - a)_+^k satisfies I_k = (k - 1) I_{k-2} - a I_{k-1}.
  const double i0 = std_normal_tail(a);
  double in;
  if (n == 0) {
    in = i0;
  } else if (a <= 1.0) {
    double prev = i0;
    double cur = normal_pdf(a) - a * i0;
    for (int k = 2; k <= n; ++k) {
      const double next = (k - 1) * prev - a * cur;
      prev = cur;
      cur = next;
    }
    in = cur;
  } else {
    // Backward continued fraction for rho_k = I_k / I_{k-1} = k / (a + rho_{k+1}).
    const int depth = n + (a < 3.0 ? 400 : (a < 10.0 ? 120 : 40));
    double rho = 0.0;
    double prod = 1.0;
    for (int k = depth; k >= 1; --k) {
      rho = k / (a + rho);
      if (k <= n) prod *= rho;
    }
    in = i0 * prod;
  }
  return std::pow(s, n) * in;
}

Transform mixture_transform(const MixtureRV& rv, double w, int taylor_terms) {
  Transform t;
  t.log_mgf = [rv, w](Complex z) { return mixture_log_mgf(rv, z) - z * w; };
  // Cumulants of X - w: -w, v + theta y^2, theta y^m.
  std::vector<double> kappa_scaled(taylor_terms + 1, 0.0);  // kappa_k / k!
  double fact = 1.0;
  for (int k = 1; k <= taylor_terms; ++k) {
    fact *= k;
    double kappa = rv.theta * std::pow(rv.y, k);
    if (k == 1) kappa = -w;
    if (k == 2) kappa += rv.v;
    kappa_scaled[k] = kappa / fact;
  }
  t.taylor.assign(taylor_terms + 1, 0.0);
  t.taylor[0] = 1.0;
  for (int n = 1; n <= taylor_terms; ++n) {
    double c = 0.0;
    for (int k = 1; k <= n; ++k) c += (static_cast<double>(k) / n) * kappa_scaled[k] * t.taylor[n - k];
    t.taylor[n] = c;
  }
  t.gaussian_variance = rv.v;
  t.frequency = std::abs(w) + rv.y * (rv.theta + 6.0 * std::sqrt(rv.theta) + 6.0) + 6.0 * std::sqrt(rv.v);
  return t;
}

Transform two_point_transform(const TwoPointRV& rv, double w, int taylor_terms) {
  Transform t;
  const double lo = -rv.a - w;
  const double hi = rv.b - w;
  const double lp_lo = std::log(rv.prob_low());
  const double lp_hi = std::log(rv.prob_high());
  t.log_mgf = [=](Complex z) {
    const Complex l1 = lp_lo + z * lo;
    const Complex l2 = lp_hi + z * hi;
    const Complex m = l1.real() >= l2.real() ? l1 : l2;
    const Complex o = l1.real() >= l2.real() ? l2 : l1;
    return m + std::log(1.0 + std::exp(o - m));
  };
  t.taylor.assign(taylor_terms + 1, 0.0);
  double fact = 1.0;
  for (int m = 0; m <= taylor_terms; ++m) {
    if (m > 0) fact *= m;
    t.taylor[m] = (rv.prob_low() * std::pow(lo, m) + rv.prob_high() * std::pow(hi, m)) / fact;
  }
  t.gaussian_variance = 0.0;
  t.frequency = std::max(std::abs(lo), std::abs(hi));
  return t;
}

double pos_moment_mixture_series(const MixtureRV& rv, double w, int alpha, const Tolerance& tol) {
  if (alpha < 1 || alpha > 6) throw DomainError("pos_moment_mixture_series: alpha must be 1..6");
  if (!std::isfinite(w)) throw DomainError("pos_moment_mixture_series: non-finite shift");
  if (rv.theta == 0.0) return gaussian_pos_moment(rv.v, -w, alpha);
  if (rv.v == 0.0) return pos_moment_poisson_local(rv.theta, rv.y, w, alpha, tol);
  const double floor_term = gaussian_abs_moment(rv.v, alpha);
  const double coeff = std::pow(2.0, alpha - 1);
  const long kmax = static_cast<long>(rv.theta + 60.0 * std::sqrt(rv.theta) + 5000.0);
  double sum = 0.0;
  double comp = 0.0;
  for (long k = 0; k <= kmax; ++k) {
    const double mu = rv.y * (static_cast<double>(k) - rv.theta) - w;
    const double term = std::exp(poisson_log_pmf(rv.theta, k)) * gaussian_pos_moment(rv.v, mu, alpha);
    const double t = sum + term;
    comp += (sum - t) + term;
    sum = t;
    if (poisson_sum_done(rv.theta, rv.y, w, alpha, k, floor_term, coeff, sum, tol)) return sum + comp;
  }
  throw NumericalError("pos_moment_mixture_series: Poisson series did not terminate");
}

double pos_moment_poisson_local(double theta, double y, double w, double alpha, const Tolerance& tol) {
  if (!(theta >= 0.0) || !(y > 0.0) || !(alpha > 0.0) || !std::isfinite(w))
    throw DomainError("pos_moment_poisson_local: invalid arguments");
  if (theta == 0.0) return w < 0.0 ? std::pow(-w, alpha) : 0.0;
  // First atom strictly above w.
  long k0 = static_cast<long>(std::max(0.0, std::floor(w / y + theta) + 1.0));
  while (y * (static_cast<double>(k0) - theta) <= w) ++k0;
  while (k0 > 0 && y * (static_cast<double>(k0 - 1) - theta) > w) --k0;
  const long kmax = k0 + static_cast<long>(theta + 60.0 * std::sqrt(theta) + 5000.0);
  double sum = 0.0;
  double comp = 0.0;
  for (long k = k0; k <= kmax; ++k) {
    const double d = y * (static_cast<double>(k) - theta) - w;
    const double term = std::exp(poisson_log_pmf(theta, k)) * std::pow(d, alpha);
    const double t = sum + term;
    comp += (sum - t) + term;
    sum = t;
    if (poisson_sum_done(theta, y, w, alpha, k, 0.0, 1.0, sum, tol)) return sum + comp;
  }
  throw NumericalError("pos_moment_poisson_local: Poisson series did not terminate");
}

RouteResult pos_moment_laplace(const Transform& x, double p, double s, int j, const Tolerance& tol) {
  if (!(p > 0.0) || !(s > 0.0)) throw DomainError("pos_moment_laplace: p and s must be positive");
  const int jmax = static_cast<int>(std::ceil(p - 1.0));
  if (j < -1 || j > jmax || j >= static_cast<int>(x.taylor.size()))
    throw DomainError("pos_moment_laplace: remainder order out of range");
  const double M = std::exp(x.log_mgf(Complex(s, 0.0)).real());
  if (!std::isfinite(M)) throw RangeError("pos_moment_laplace: moment generating function overflows");

  auto integrand = [&](double t) {
    const Complex z(s, t);
    const Complex lz = std::log(z);
    Complex val = std::exp(x.log_mgf(z) - (p + 1.0) * lz);
    for (int m = 0; m <= j; ++m) val -= x.taylor[m] * std::exp((m - p - 1.0) * lz);
    return val.real();
  };
  // Exact integral over [T, inf) of the subtracted polynomial part.
  auto poly_tail = [&](double T) {
    double r = 0.0;
    const Complex z(s, T);
    for (int m = 0; m <= j; ++m)
      r += x.taylor[m] * (std::pow(z, m - p) / (Complex(0.0, 1.0) * (m - p))).real();
    return r;
  };

  const double pref = std::tgamma(p + 1.0) / kPi;
  const double v = x.gaussian_variance;
  double T = v > 0.0 ? std::max(2.0, 4.0 / std::sqrt(v)) : std::max(8.0, 4.0 * x.frequency);
  double lo = 0.0;
  double acc = 0.0;
  double err = 0.0;
  for (int round = 0; round < 60; ++round) {
    const double piece_abs = std::max(0.25 * tol.abs / pref, 0.1 * tol.rel * std::abs(acc));
    const auto piece = numerics::integrate(integrand, lo, T, 0.25 * tol.rel, piece_abs,
                                           panel_count(T - lo, x.frequency));
    acc += piece.value;
    err += piece.error;
    const double total = acc + poly_tail(T);
    const double dropped = envelope_tail(M, v, p, T);
    if (dropped <= std::max(tol.abs / pref, 0.25 * tol.rel * std::abs(total))) {
      const double value = pref * total;
      const double e = pref * (err + dropped);
      return {clamp_result(value, e, tol, "pos_moment_laplace"), e, false};
    }
    lo = T;
    T *= 2.0;
  }
  throw NumericalError("pos_moment_laplace: truncation point not reached", pref * err);
}

RouteResult pos_moment_charfn(const Transform& x, double p, const Tolerance& tol) {
  if (!(p > 0.0)) throw DomainError("pos_moment_charfn: p must be positive");
  const int ell = static_cast<int>(std::ceil(p - 1.0));
  const int k = static_cast<int>(std::floor(p));
  const bool integer_p = (p == std::floor(p));
  const int M = static_cast<int>(x.taylor.size()) - 1;
  if (M <= ell + 8) throw DomainError("pos_moment_charfn: not enough Taylor coefficients");

  double fact_k = 1.0;
  for (int i = 2; i <= k; ++i) fact_k *= i;
  const double lead = integer_p ? 0.5 * x.taylor[k] * fact_k : 0.0;

  // Series region [0, t0] integrated term by term.
  double radius = 0.0;
  for (int m = 1; m <= M; ++m) radius = std::max(radius, std::pow(std::abs(x.taylor[m]), 1.0 / m));
  const double t0 = 0.5 / std::max(radius, 1e-300);
  double small = 0.0;
  for (int m = ell + 1; m <= M; ++m) {
    if (integer_p && m == k) continue;  // Re i^{-1} = 0
    const double q = m - p;
    small += x.taylor[m] * std::cos(0.5 * kPi * (q - 1.0)) * std::pow(t0, q) / q;
  }

  auto integrand = [&](double t) {
    Complex val = std::exp(x.log_mgf(Complex(0.0, t)));
    Complex itm = 1.0;
    for (int m = 0; m <= ell; ++m) {
      val -= x.taylor[m] * itm;
      itm *= Complex(0.0, t);
    }
    return (val * std::pow(t, -(p + 1.0)) * ipow(-(p + 1.0))).real();
  };
  auto poly_tail = [&](double T) {
    double r = 0.0;
    for (int m = 0; m <= ell; ++m)
      r -= x.taylor[m] * std::cos(0.5 * kPi * (m - p - 1.0)) * std::pow(T, m - p) / (p - m);
    return r;
  };

  const double pref = std::tgamma(p + 1.0) / kPi;
  const double v = x.gaussian_variance;
  double lo = t0;
  double T = std::max(2.0 * t0, v > 0.0 ? 4.0 / std::sqrt(v) : 8.0 * x.frequency);
  double acc = small;
  double err = 0.0;
  for (int round = 0; round < 60; ++round) {
    const double piece_abs =
        std::max(0.25 * tol.abs / pref, 0.1 * tol.rel * std::abs(lead / pref + acc));
    const auto piece = numerics::integrate(integrand, lo, T, 0.25 * tol.rel, piece_abs,
                                           panel_count(T - lo, x.frequency));
    acc += piece.value;
    err += piece.error;
    const double total = lead + pref * (acc + poly_tail(T));
    const double dropped = pref * envelope_tail(1.0, v, p, T);
    if (dropped <= std::max(tol.abs, 0.25 * tol.rel * std::abs(total))) {
      const double e = pref * err + dropped;
      return {clamp_result(total, e, tol, "pos_moment_charfn"), e, p - ell < 0.5};
    }
    lo = T;
    T *= 2.0;
  }
  throw NumericalError("pos_moment_charfn: truncation point not reached", pref * err);
}

double pos_moment(const Law& law, double w, double alpha, PosMomentMethod method, const Tolerance& tol) {
  if (!(alpha > 0.0)) throw DomainError("pos_moment: alpha must be positive");
  if (!std::isfinite(w)) throw DomainError("pos_moment: non-finite shift");
  using Tag = PosMomentMethod::Tag;
  const double ws = w - law.location;
  const int taylor_terms = 64;

  if (const auto* tp = std::get_if<TwoPointRV>(&law.rv)) {
    switch (method.tag) {
      case Tag::automatic:
      case Tag::series: {
        const double lo = -tp->a - ws;
        const double hi = tp->b - ws;
        return tp->prob_low() * (lo > 0.0 ? std::pow(lo, alpha) : 0.0) +
               tp->prob_high() * (hi > 0.0 ? std::pow(hi, alpha) : 0.0);
      }
      case Tag::laplace: {
        const double s = method.s > 0.0 ? method.s : 1.0;
        return pos_moment_laplace(two_point_transform(*tp, ws, taylor_terms), alpha, s, method.j, tol).value;
      }
      case Tag::charfn:
        return pos_moment_charfn(two_point_transform(*tp, ws, taylor_terms), alpha, tol).value;
    }
  }

  const auto& rv = std::get<MixtureRV>(law.rv);
  const bool small_int = is_small_integer(alpha, 1, 6);
  switch (method.tag) {
    case Tag::automatic:
      if (rv.v == 0.0) return pos_moment_poisson_local(rv.theta, rv.y, ws, alpha, tol);
      if (small_int) return pos_moment_mixture_series(rv, ws, static_cast<int>(alpha), tol);
      return pos_moment_laplace(mixture_transform(rv, ws, taylor_terms), alpha,
                                std::log1p(rv.y) / rv.y, -1, tol).value;
    case Tag::series:
      if (rv.v == 0.0) return pos_moment_poisson_local(rv.theta, rv.y, ws, alpha, tol);
      if (!small_int) throw DomainError("pos_moment: series route needs integer alpha in 1..6");
      return pos_moment_mixture_series(rv, ws, static_cast<int>(alpha), tol);
    case Tag::laplace: {
      const double s = method.s > 0.0 ? method.s : std::log1p(rv.y) / rv.y;
      return pos_moment_laplace(mixture_transform(rv, ws, taylor_terms), alpha, s, method.j, tol).value;
    }
    case Tag::charfn:
      return pos_moment_charfn(mixture_transform(rv, ws, taylor_terms), alpha, tol).value;
  }
  throw DomainError("pos_moment: unknown method");
}

}  // namespace tailbound
