#pragma once

#include <cstdint>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/distributions.hpp"

namespace tailbound {

/// Independent two-point summands with a common upper bound y_cap.
struct SumSpec {
  std::vector<TwoPointRV> summands;
  double y_cap;

  SumSpec(std::vector<TwoPointRV> summands, double y_cap);
  double variance() const;
  double positive_third_moment() const;
};

/// Test functions (x - t)_+^alpha and exp(lambda x).
struct TestFunction {
  enum class Kind { power_part, power_part2, exponential };
  Kind kind;
  double t = 0.0;
  double alpha = 3.0;
  double lambda = 0.0;

  /// (x - t)_+^alpha with alpha >= 3.
  static TestFunction power_part(double t, double alpha = 3.0);
  /// (x - t)_+^alpha with alpha >= 2.
  static TestFunction power_part2(double t, double alpha = 2.0);
  /// exp(lambda x) with lambda > 0.
  static TestFunction exponential(double lambda);

  double operator()(double x) const;
};

struct MCEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

struct MCMean {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

/// Mixture parameters matching the aggregate budgets of a sum:
/// sigma^2 = sum E X_i^2, eps = sum E (X_i)_+^3 / (sigma^2 y_cap).
BoundParams matched_params(const SumSpec& spec);

/// n summands with random budgets, each the extremal two-point law of its budget.
SumSpec random_sum_spec(std::uint64_t seed, int n, double y_cap);

/// Two-point law with E X^2 = sigma^2 and E X_+^3 = beta.
TwoPointRV extremal_two_point(double sigma, double y, double beta);

struct ExtremalSum {
  double b = 0.0;
  double a = 0.0;
  long m = 0;
  SumSpec spec;
};

/// m copies of X_{b/sqrt(m), b/sqrt(m)} and m copies of X_{a/m, y} with
/// aggregate variance sigma^2 and aggregate positive third moment eps sigma^2 y.
ExtremalSum extremal_sum(const BoundParams& p, long m);
SumSpec extremal_sum_spec(const BoundParams& p, long m);

/// Exact E f(S) over all 2^n outcomes (n <= 24).
double enumerate_expectation(const SumSpec& spec, const TestFunction& f);

/// Exact E f(S) by grouping identical summands into binomial counts.
double grouped_expectation(const SumSpec& spec, const TestFunction& f, double max_terms = 5e7);

/// E f(N(0, (1 - eps) sigma^2) + y (Pois(eps sigma^2 / y^2) - eps sigma^2 / y^2)).
double mixture_expectation_f(const BoundParams& p, const TestFunction& f);

/// E f(y (Pois(sigma^2 / y^2) - sigma^2 / y^2)).
double poisson_expectation_f(double sigma, double y, const TestFunction& f);

/// Monte Carlo estimate of P(S >= x); identical for any thread count.
MCEstimate mc_tail(const SumSpec& spec, double x, long n, std::uint64_t seed,
                   unsigned threads = 0);

/// Monte Carlo estimate of E f(S); identical for any thread count.
MCMean mc_expectation(const SumSpec& spec, const TestFunction& f, long n, std::uint64_t seed,
                      unsigned threads = 0);

/// E (eta + a)_+^p - E (X_{a,1} + a)_+^p for the matched mixture eta.
double hp_counterexample_gap(double p, double a);

}  // namespace tailbound
