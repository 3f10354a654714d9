#pragma once

#include <variant>

#include "tailbound/special_functions.hpp"

namespace tailbound {

/// Bound parameters: standard deviation bound sigma, a.s. upper bound y and
/// the third-moment share eps, with beta = eps * sigma^2 * y.
struct BoundParams {
  double sigma;
  double y;
  double eps;

  BoundParams(double sigma, double y, double eps);
  double beta() const { return eps * sigma * sigma * y; }
  double variance() const { return sigma * sigma; }
};

/// Law of N(0, v) + y * (Pois(theta) - theta).
struct MixtureRV {
  double v;
  double y;
  double theta;

  MixtureRV(double v, double y, double theta);
  static MixtureRV from(const BoundParams& p);
  /// y * (Pois(theta) - theta), no Gaussian part.
  static MixtureRV poisson(double y, double theta);
  /// N(0, v).
  static MixtureRV gaussian(double v);

  double mean() const { return 0.0; }
  double variance() const { return v + y * y * theta; }
  double stddev() const;
};

/// Zero-mean law on {-a, b}.
struct TwoPointRV {
  double a;
  double b;

  TwoPointRV(double a, double b);
  double prob_low() const { return b / (a + b); }
  double prob_high() const { return a / (a + b); }
  double mean() const { return 0.0; }
  double variance() const { return a * b; }
  double stddev() const;
  double positive_third_moment() const { return a * b * b * b / (a + b); }
};

/// A reference law shifted by a constant: location + X.
struct Law {
  std::variant<MixtureRV, TwoPointRV> rv;
  double location = 0.0;

  Law(const MixtureRV& m, double loc = 0.0) : rv(m), location(loc) {}
  Law(const TwoPointRV& t, double loc = 0.0) : rv(t), location(loc) {}

  double mean() const { return location; }
  double stddev() const;
  /// Right end of the support; +inf for mixtures.
  double sup() const;
  /// P(X = x) at the right end of the support, 0 for mixtures.
  double atom_at_sup() const;
};

/// E exp(z X) for X ~ rv.
Complex mixture_mgf(const MixtureRV& rv, Complex z);

/// log E exp(z X), principal branch continued along the argument.
Complex mixture_log_mgf(const MixtureRV& rv, Complex z);

/// P(X >= x) for X ~ rv.
double mixture_tail(const MixtureRV& rv, double x, const Tolerance& tol = {});

/// Closed-form P_alpha bound of the two-point law at x.
double two_point_palpha_closed(const TwoPointRV& rv, double alpha, double x);

/// Closed-form best exponential bound of the two-point law at x.
double two_point_pinf_closed(const TwoPointRV& rv, double x);

}  // namespace tailbound
