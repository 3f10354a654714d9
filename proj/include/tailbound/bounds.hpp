#pragma once

#include <vector>

#include "tailbound/distributions.hpp"
#include "tailbound/posmoments.hpp"
#include "tailbound/special_functions.hpp"

namespace tailbound {

enum class BoundMethod { trivial, closed_form, minimization, root_solve, atom, quadrature };

/// A tail bound together with the minimizing parameter.
struct TailBoundResult {
  double value = 1.0;
  /// t_x for P_alpha bounds, lambda_x for exponential bounds, alpha_x for the split.
  double optimizer = 0.0;
  BoundMethod method = BoundMethod::trivial;
  double err_estimate = 0.0;
};

/// Per-summand budget: X_i <= y_i, E X_i^2 <= sigma_i^2, E (X_i)_+^3 <= beta_i.
struct SummandBudget {
  double sigma_i;
  double beta_i;
  double y_i;
};

struct EffectiveEpsilon {
  double eps_tilde = 0.0;
  double sigma = 0.0;
  /// eps_tilde outside (0, 1).
  bool degenerate = false;
  /// Some beta_i exceeds sigma_i^2 * y.
  bool budget_warning = false;
};

/// Bennett-Hoeffding bound.
TailBoundResult bh(double sigma, double y, double x);

/// Bennett-Hoeffding bound on E exp(lambda S).
double bh_exp(double sigma, double y, double lambda);

/// PU bound on E exp(lambda S), which uses the third-moment fraction eps.
double pu_exp(const BoundParams& p, double lambda);

/// PU tail bound through the Lambert-W closed form.
TailBoundResult pu(const BoundParams& p, double x);

/// PU tail bound by direct minimization over lambda.
TailBoundResult pu_numeric(const BoundParams& p, double x);

/// m(t) = t + E(X - t)_+^alpha / E(X - t)_+^(alpha - 1).
double m_function(const Law& law, double alpha, double t,
                  PosMomentMethod method = PosMomentMethod::automatic(),
                  const Tolerance& tol = {});

/// Unique t with m(t) = x, for mean < x < sup of the support.
double solve_t_x(const Law& law, double alpha, double x,
                 PosMomentMethod method = PosMomentMethod::automatic(),
                 const Tolerance& tol = {});

/// P_alpha(X; x) = inf_{t < x} E(X - t)_+^alpha / (x - t)^alpha.
TailBoundResult p_alpha(const Law& law, double alpha, double x,
                        PosMomentMethod method = PosMomentMethod::automatic(),
                        const Tolerance& tol = {});

/// Bentkus bound: P_2 of y * (Pois(sigma^2 / y^2) - sigma^2 / y^2).
TailBoundResult be(double sigma, double y, double x,
                   PosMomentMethod method = PosMomentMethod::automatic(),
                   const Tolerance& tol = {});
TailBoundResult be(const BoundParams& p, double x,
                   PosMomentMethod method = PosMomentMethod::automatic(),
                   const Tolerance& tol = {});

/// P_3 of the Gaussian plus centered Poisson mixture.
TailBoundResult pin(const BoundParams& p, double x,
                    PosMomentMethod method = PosMomentMethod::automatic(),
                    const Tolerance& tol = {});

/// Cantelli bound sigma^2 / (sigma^2 + x^2); 1 for x <= 0.
double ca(double sigma, double x);

/// Best exponential bound of N(0, sigma^2); 1 for x <= 0.
double en(double sigma, double x);

/// Comparison constant c_{alpha, beta}.
double c_const(double alpha, double beta);

/// Least log-concave majorant of u -> P(Pois(theta) >= u).
double plc_poisson_tail(double theta, double u);

/// Log-concave majorant of z -> P(y * (Pois(theta) - theta) >= z).
double plc_scaled_poisson(double theta, double y, double z);

/// Gaussian smoothing of the log-concave Poisson majorant at x.
double plc_mixture_upper(const BoundParams& p, double x, const Tolerance& tol = {});

/// min(1, c_{3,0} * plc_mixture_upper).
double lc3_bound(const BoundParams& p, double x, const Tolerance& tol = {});

/// Effective sigma and eps when only summands with y_i > sigma_i carry beta.
EffectiveEpsilon effective_epsilon(const std::vector<SummandBudget>& summands, double y);

/// Eaton bound inf_{0 < t < x} E(|Z| - t)_+^3 / (x - t)^3.
TailBoundResult ea(double x);

/// alpha in (eps, 1) splitting x between the Gaussian and Poisson parts.
double alpha_x_split(const BoundParams& p, double x);

/// EN_{(1-eps) sigma^2}((1 - alpha) x) * BH_{eps sigma^2, y}(alpha x).
double split_product(const BoundParams& p, double x, double alpha);

}  // namespace tailbound
