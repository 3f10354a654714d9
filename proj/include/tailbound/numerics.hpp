#pragma once

#include <functional>

namespace tailbound::numerics {

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod integration of f over [a, b].
/// The interval is first cut into `panels` equal pieces (useful for
/// oscillatory integrands). Throws NumericalError when the accumulated error
/// estimate exceeds max(abs_tol, rel_tol * |value|).
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, double abs_tol, int panels = 1);

/// Root of a function that changes sign on [lo, hi] (TOMS 748 bracketing).
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol, int max_iter = 200);

/// Root of a nondecreasing function by bisection to machine resolution.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         int max_iter = 400);

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

/// Brent minimization of a unimodal function on [lo, hi].
Minimum minimize(const std::function<double(double)>& f, double lo, double hi,
                 int max_iter = 500);

/// Runs body(i) for i in [0, n) on a thread pool; results must be written
/// into caller-owned storage indexed by i.
void parallel_for(long n, const std::function<void(long)>& body, unsigned threads = 0);

}  // namespace tailbound::numerics
