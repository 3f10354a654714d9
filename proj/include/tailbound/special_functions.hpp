#pragma once

#include <complex>

namespace tailbound {

using Complex = std::complex<double>;

/// Accuracy controls shared by every iterative routine.
struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-300;
  int max_iter = 200;

  /// Throws DomainError unless rel, abs lie in (0, 1) and max_iter >= 1.
  void validate() const;
};

/// Principal branch of the Lambert W function on [0, inf).
double lambert_w0(double z);

/// lambert_w0(exp(log_z)) without forming exp(log_z).
double lambert_w0_log(double log_z);

/// psi(u) = (1 + u) ln(1 + u) - u for u > -1.
double bennett_psi(double u);

/// P(Pois(theta) >= u).
double poisson_tail(double theta, double u);

/// Natural log of P(Pois(theta) = k).
double poisson_log_pmf(double theta, long k);

/// P(N(0, v) >= x).
double normal_tail(double v, double x);

/// Standard normal density.
double normal_pdf(double z);

/// P(Z >= z) for a standard normal Z.
double std_normal_tail(double z);

/// e_j(u) = exp(u) - sum_{m <= j} u^m / m!, for j in {-1, ..., 3}.
Complex exp_remainder(int j, Complex u);

/// Real-argument version of exp_remainder.
double exp_remainder(int j, double u);

/// Snaps u to the nearest integer when it lies within rounding distance of it.
double snap_to_lattice(double u);

}  // namespace tailbound
