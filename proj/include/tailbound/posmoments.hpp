#pragma once

#include <functional>
#include <vector>

#include "tailbound/distributions.hpp"
#include "tailbound/special_functions.hpp"

namespace tailbound {

/// Route used to compute E(X - w)_+^p.
struct PosMomentMethod {
  enum class Tag { automatic, series, laplace, charfn };
  Tag tag = Tag::automatic;
  double s = 0.0;  ///< Laplace abscissa; 0 selects ln(1 + y) / y.
  int j = -1;      ///< Laplace remainder order.

  static PosMomentMethod automatic() { return {}; }
  static PosMomentMethod series() { return {Tag::series, 0.0, -1}; }
  static PosMomentMethod laplace(double s = 0.0, int j = -1) { return {Tag::laplace, s, j}; }
  static PosMomentMethod charfn() { return {Tag::charfn, 0.0, -1}; }
};

/// Transform data of an (already shifted) variable X for the integral routes.
struct Transform {
  /// log E exp(z X).
  std::function<Complex(Complex)> log_mgf;
  /// Taylor coefficients E X^m / m!, m = 0, 1, ...
  std::vector<double> taylor;
  /// |E exp((s + it) X)| <= E exp(s X) * exp(-gaussian_variance * t^2 / 2).
  double gaussian_variance = 0.0;
  /// Largest |x| on which the law puts appreciable mass; sets panel widths.
  double frequency = 1.0;
};

/// Transform of X - w for a mixture.
Transform mixture_transform(const MixtureRV& rv, double w, int taylor_terms = 40);

/// Transform of X - w for a two-point law.
Transform two_point_transform(const TwoPointRV& rv, double w, int taylor_terms = 40);

struct RouteResult {
  double value = 0.0;
  double error = 0.0;
  bool slow_decay = false;
};

/// E(sqrt(v) Z + mu)_+^n for integer n >= 0.
double gaussian_pos_moment(double v, double mu, int n);

/// E(X - w)_+^alpha for a mixture by conditioning on the Poisson count
/// (integer alpha in 1..6).
double pos_moment_mixture_series(const MixtureRV& rv, double w, int alpha,
                                 const Tolerance& tol = {});

/// E X_+^p through the Fourier-Laplace inversion along Re z = s.
RouteResult pos_moment_laplace(const Transform& x, double p, double s, int j,
                               const Tolerance& tol = {});

/// E X_+^p through characteristic-function inversion.
RouteResult pos_moment_charfn(const Transform& x, double p, const Tolerance& tol = {});

/// E(y (Pois(theta) - theta) - w)_+^alpha by summing the atoms above w.
double pos_moment_poisson_local(double theta, double y, double w, double alpha,
                                const Tolerance& tol = {});

/// E(X - w)_+^alpha dispatched to the most suitable route.
double pos_moment(const Law& law, double w, double alpha,
                  PosMomentMethod method = PosMomentMethod::automatic(),
                  const Tolerance& tol = {});

}  // namespace tailbound
