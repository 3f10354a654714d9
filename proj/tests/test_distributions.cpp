#include <cmath>
#include <random>

#include "doctest.h"
#include "tailbound/bounds.hpp"
#include "tailbound/distributions.hpp"
#include "tailbound/errors.hpp"

using namespace tailbound;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Dense-grid minimization of E(X - t)_+^alpha / (x - t)^alpha for a two-point law.
double two_point_palpha_grid(double a, double b, double alpha, double x) {
  const double pl = b / (a + b), ph = a / (a + b);
  double best = 1.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double t = x - std::pow(10.0, -6.0 + 9.0 * i / n);
    const double m = pl * std::pow(std::max(-a - t, 0.0), alpha) + ph * std::pow(std::max(b - t, 0.0), alpha);
    best = std::min(best, m / std::pow(x - t, alpha));
  }
  return best;
}

// Dense-grid minimization of exp(-lambda x) E exp(lambda X).
double two_point_pinf_grid(double a, double b, double x) {
  const double pl = b / (a + b), ph = a / (a + b);
  double best = 1.0;
  for (int i = 1; i < 200000; ++i) {
    const double l = 20.0 * i / 200000.0;
    best = std::min(best, std::exp(-l * x) * (pl * std::exp(-l * a) + ph * std::exp(l * b)));
  }
  return best;
}

}  // namespace

TEST_CASE("parameter types validate their invariants") {
  CHECK_THROWS_AS(BoundParams(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(BoundParams(1.0, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(BoundParams(1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(BoundParams(1.0, 1.0, 0.0), DomainError);
  const BoundParams p(2.0, 0.5, 0.3);
  CHECK(p.beta() == doctest::Approx(0.3 * 4.0 * 0.5));
  CHECK(p.beta() < p.sigma * p.sigma * p.y);
  const auto m = MixtureRV::from(p);
  CHECK(m.v == doctest::Approx(0.7 * 4.0));
  CHECK(m.theta == doctest::Approx(0.3 * 4.0 / 0.25));
  CHECK(m.variance() == doctest::Approx(4.0));
  CHECK_THROWS_AS(MixtureRV(0.0, 1.0, 0.0), DomainError);
  const TwoPointRV t(1.0, 3.0);
  CHECK(t.prob_low() == doctest::Approx(0.75));
  CHECK(t.prob_high() == doctest::Approx(0.25));
  CHECK(t.variance() == doctest::Approx(3.0));
  CHECK(t.positive_third_moment() == doctest::Approx(6.75));
  CHECK_THROWS_AS(TwoPointRV(0.0, 1.0), DomainError);
}

TEST_CASE("mixture_mgf") {
  const MixtureRV g = MixtureRV::gaussian(2.0);
  CHECK(rel_err(mixture_mgf(g, 0.7).real(), std::exp(0.5 * 2.0 * 0.49)) < 1e-15);
  const MixtureRV m(0.5, 1.3, 0.8);
  CHECK(std::abs(mixture_mgf(m, 0.0) - Complex(1.0, 0.0)) == 0.0);
  const MixtureRV pois(0.0, 1.0, 1.0);
  CHECK(rel_err(mixture_mgf(pois, 1.0).real(), std::exp(std::exp(1.0) - 2.0)) < 1e-14);
  CHECK_THROWS_AS(mixture_mgf(m, Complex(700.0, 0.0)), RangeError);
  // Identity with the PU exponential-moment bound.
  for (double eps : {0.1, 0.5, 0.9}) {
    const BoundParams p(1.3, 0.7, eps);
    for (double l : {0.0, 0.3, 1.0, 4.0}) {
      CHECK(rel_err(mixture_mgf(MixtureRV::from(p), l).real(), pu_exp(p, l)) < 1e-12);
    }
  }
  // Characteristic function has modulus <= 1.
  for (double t = 0.0; t < 20.0; t += 0.9) CHECK(std::abs(mixture_mgf(m, Complex(0.0, t))) <= 1.0 + 1e-15);
}

TEST_CASE("mixture_tail") {
  CHECK(mixture_tail(MixtureRV::gaussian(1.0), 1.3) == normal_tail(1.0, 1.3));
  const MixtureRV m(0.9, 1.0, 0.1);
  CHECK(rel_err(mixture_tail(m, 2.0), 0.025492273302391965143) < 1e-12);
  const double far = -10.0 * (std::sqrt(m.v) + m.y * std::sqrt(m.theta) + m.y * m.theta);
  CHECK(mixture_tail(m, far) >= 1.0 - 1e-6);
  // Pure Poisson delegates to the lattice tail; lattice points are inclusive.
  const MixtureRV p = MixtureRV::poisson(1.0, 0.6);
  CHECK(rel_err(mixture_tail(p, 2.0 - 0.6), poisson_tail(0.6, 2.0)) < 1e-14);
  CHECK(rel_err(mixture_tail(p, 1.5 - 0.6), poisson_tail(0.6, 2.0)) < 1e-14);
  // Monotone, inside [0, 1].
  double prev = 1.0;
  for (double x = -5.0; x < 15.0; x += 0.3) {
    const double v = mixture_tail(m, x);
    CHECK(v >= 0.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("mixture_tail agrees with Monte Carlo") {
  const MixtureRV m(0.9, 1.0, 0.1);
  std::mt19937_64 eng(12345);
  std::normal_distribution<double> z(0.0, 1.0);
  std::poisson_distribution<int> k(0.1);
  const int n = 2000000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (std::sqrt(0.9) * z(eng) + (k(eng) - 0.1) >= 2.0) ++hits;
  const double p = double(hits) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(mixture_tail(m, 2.0) - p) <= 4.0 * se);
}

TEST_CASE("two_point_palpha_closed") {
  const TwoPointRV t(1.0, 3.0);
  CHECK(two_point_palpha_closed(t, 1.2, -1.0) == 1.0);
  CHECK(two_point_palpha_closed(t, 2.0, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(two_point_palpha_closed(t, 7.0, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(rel_err(two_point_palpha_closed(t, 2.0, 1.0), 0.75) < 1e-14);
  CHECK(two_point_palpha_closed(t, 2.0, 3.5) == 0.0);
  CHECK_THROWS_AS(two_point_palpha_closed(t, 1.0, 1.0), DomainError);
  for (double alpha : {1.5, 2.0, 3.0}) {
    for (double x : {0.5, 1.0, 2.0}) {
      CHECK(rel_err(two_point_palpha_closed(t, alpha, x), two_point_palpha_grid(1.0, 3.0, alpha, x)) < 1e-6);
    }
  }
  // Nondecreasing in alpha and dominated by the exponential bound.
  for (double x : {0.5, 1.0, 2.0}) {
    double prev = 0.0;
    for (double alpha : {1.5, 2.0, 3.0, 6.0, 12.0}) {
      const double v = two_point_palpha_closed(t, alpha, x);
      CHECK(v >= prev);
      CHECK(v <= two_point_pinf_closed(t, x) * (1.0 + 1e-12));
      prev = v;
    }
  }
  const double big = two_point_palpha_closed(t, 200.0, 1.5);
  CHECK(rel_err(big, two_point_pinf_closed(t, 1.5)) < 0.02);
}

TEST_CASE("two_point_pinf_closed") {
  CHECK(two_point_pinf_closed(TwoPointRV(1.0, 3.0), 0.0) == 1.0);
  CHECK(rel_err(two_point_pinf_closed(TwoPointRV(1.0, 1.0), 0.5), 0.87738267530166164055) < 1e-14);
  CHECK(rel_err(two_point_pinf_closed(TwoPointRV(1.0, 1.0), 0.5), two_point_pinf_grid(1.0, 1.0, 0.5)) < 1e-7);
  CHECK(two_point_pinf_closed(TwoPointRV(1.0, 3.0), 3.0) == doctest::Approx(0.25).epsilon(1e-15));
}
