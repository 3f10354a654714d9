#include <cmath>
#include <random>

#include "doctest.h"
#include "tailbound/distributions.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/posmoments.hpp"

using namespace tailbound;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Composite Simpson rule for E(sqrt(v) Z + mu)_+^n, integrating over z.
double gaussian_moment_simpson(double v, double mu, double n) {
  const double s = std::sqrt(v);
  const double lo = std::max(-mu / s, -40.0), hi = 40.0;
  if (lo >= hi) return 0.0;
  const int steps = 400000;
  const double h = (hi - lo) / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double z = lo + i * h;
    const double base = std::max(s * z + mu, 0.0);
    const double f = std::pow(base, n) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    acc += f * (i == 0 || i == steps ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("gaussian_pos_moment matches quadrature") {
  for (int n = 0; n <= 6; ++n) {
    for (double mu : {-7.0, -3.0, -1.0, -0.2, 0.0, 0.5, 2.0, 6.0}) {
      for (double v : {0.25, 1.0, 3.0}) {
        const double ref = gaussian_moment_simpson(v, mu, n);
        CHECK(rel_err(gaussian_pos_moment(v, mu, n), ref) < 1e-9);
      }
    }
  }
  CHECK(gaussian_pos_moment(0.0, 2.0, 3) == 8.0);
  CHECK(gaussian_pos_moment(0.0, -2.0, 3) == 0.0);
  // Deep tail: I_3(a) ~ 6 phi(a) / a^4.
  const double a = 30.0;
  const double approx = 6.0 * std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI) / std::pow(a, 4);
  CHECK(rel_err(gaussian_pos_moment(1.0, -a, 3), approx) < 0.02);
}

TEST_CASE("pos_moment_mixture_series") {
  const MixtureRV g = MixtureRV::gaussian(1.0);
  CHECK(rel_err(pos_moment_mixture_series(g, 0.0, 1), 1.0 / std::sqrt(2.0 * M_PI)) < 1e-15);
  CHECK(rel_err(pos_moment_mixture_series(g, 0.0, 2), 0.5) < 1e-15);
  const MixtureRV m(0.9, 1.0, 0.1);
  CHECK(rel_err(pos_moment_mixture_series(m, 1.0, 3), 0.11415847973153176186) < 1e-12);
  CHECK(rel_err(pos_moment_mixture_series(m, 0.0, 2), 0.51279155330332415107) < 1e-12);
  CHECK(rel_err(pos_moment_mixture_series(m, 2.0, 3), 0.009866575753956580669) < 1e-12);
  const MixtureRV m9(0.1, 1.0, 0.9);
  CHECK(rel_err(pos_moment_mixture_series(m9, 1.0, 3), 0.28818679883343805017) < 1e-12);
  CHECK_THROWS_AS(pos_moment_mixture_series(m, 1.0, 0), DomainError);
  CHECK_THROWS_AS(pos_moment_mixture_series(m, 1.0, 7), DomainError);
}

TEST_CASE("pos_moment_laplace") {
  const auto g = mixture_transform(MixtureRV::gaussian(1.0), 0.0);
  CHECK(rel_err(pos_moment_laplace(g, 2.0, 1.0, -1).value, 0.5) < 1e-9);
  const auto t = two_point_transform(TwoPointRV(1.0, 1.0), 0.0);
  CHECK(rel_err(pos_moment_laplace(t, 3.0, 1.0, -1).value, 0.5) < 1e-8);
  const MixtureRV m = MixtureRV::from(BoundParams(1.0, 1.0, 0.1));
  const double series = pos_moment_mixture_series(m, 2.0, 3);
  const auto lap = pos_moment_laplace(mixture_transform(m, 2.0), 3.0, std::log(2.0), -1);
  CHECK(rel_err(lap.value, series) < 1e-6);
  CHECK(rel_err(lap.value, 0.009866575753956580669) < 1e-8);
  // Remainder orders j >= 0 give the same value.
  for (int j = 0; j <= 2; ++j)
    CHECK(rel_err(pos_moment_laplace(mixture_transform(m, 2.0), 3.0, 0.5, j).value, series) < 1e-7);
  CHECK_THROWS_AS(pos_moment_laplace(g, 2.0, 1.0, 2), DomainError);
  CHECK_THROWS_AS(pos_moment_laplace(g, 2.0, -1.0, -1), DomainError);
}

TEST_CASE("pos_moment_charfn") {
  const auto g = mixture_transform(MixtureRV::gaussian(1.0), 0.0);
  CHECK(rel_err(pos_moment_charfn(g, 2.0).value, 0.5) < 1e-9);
  CHECK(rel_err(pos_moment_charfn(g, 1.0).value, 1.0 / std::sqrt(2.0 * M_PI)) < 1e-9);
  const MixtureRV m = MixtureRV::from(BoundParams(1.0, 1.0, 0.9));
  const auto cf = pos_moment_charfn(mixture_transform(m, 1.0), 3.0);
  CHECK(rel_err(cf.value, pos_moment_mixture_series(m, 1.0, 3)) < 1e-5);
  CHECK(rel_err(cf.value, 0.28818679883343805017) < 1e-7);
  CHECK_FALSE(cf.slow_decay);
  CHECK(pos_moment_charfn(g, 2.2).slow_decay);
  // Fractional order against quadrature.
  CHECK(rel_err(pos_moment_charfn(g, 2.5).value, gaussian_moment_simpson(1.0, 0.0, 2.5)) < 1e-7);
}

TEST_CASE("pos_moment_poisson_local") {
  CHECK(rel_err(pos_moment_poisson_local(1.0, 1.0, -10.0, 1.0), 10.0) < 1e-12);
  CHECK(rel_err(pos_moment_poisson_local(0.6, 1.0, 0.4, 2.0), 0.21118836390597356737) < 1e-13);
  CHECK(rel_err(pos_moment_poisson_local(0.6, 1.0, 0.4, 2.5), 0.27041711333183547893) < 1e-13);
  CHECK(pos_moment_poisson_local(0.6, 1.0, 200.0, 3.0) < 1e-250);
  CHECK(pos_moment_poisson_local(0.0, 1.0, -2.0, 2.0) == 4.0);
  // Atoms at exactly w contribute nothing.
  CHECK(rel_err(pos_moment_poisson_local(0.5, 2.0, 2.0 * (1 - 0.5), 1.0),
                pos_moment_poisson_local(0.5, 2.0, 2.0 * (1 - 0.5) + 1e-13, 1.0)) < 1e-11);
}

TEST_CASE("pos_moment dispatcher") {
  CHECK(rel_err(pos_moment(Law(TwoPointRV(1.0, 3.0)), 0.0, 3.0), 6.75) < 1e-15);
  const Law eta(MixtureRV::from(BoundParams(1.0, 1.0, 0.1)));
  const double series = pos_moment(eta, 0.0, 2.0);
  CHECK(rel_err(series, 0.51279155330332415107) < 1e-12);
  CHECK(rel_err(pos_moment(eta, 0.0, 2.0, PosMomentMethod::charfn()), series) < 1e-6);
  CHECK(rel_err(pos_moment(eta, 0.0, 2.0, PosMomentMethod::laplace()), series) < 1e-6);
  // Fractional order uses the Laplace route; cross-check with the charfn route.
  const double frac = pos_moment(eta, 0.5, 2.5);
  CHECK(rel_err(frac, pos_moment(eta, 0.5, 2.5, PosMomentMethod::charfn())) < 1e-6);
  CHECK_THROWS_AS(pos_moment(eta, 0.5, 2.5, PosMomentMethod::series()), DomainError);
  CHECK_THROWS_AS(pos_moment(eta, 0.5, -1.0), DomainError);
  // Two-point law through the integral routes.
  const Law tp(TwoPointRV(1.0, 3.0));
  CHECK(rel_err(pos_moment(tp, 0.5, 3.0, PosMomentMethod::laplace(1.0)), pos_moment(tp, 0.5, 3.0)) < 1e-6);
  // Location shift.
  CHECK(rel_err(pos_moment(Law(TwoPointRV(1.0, 3.0), 2.0), 2.0, 3.0), 6.75) < 1e-15);
}

TEST_CASE("shift monotonicity, convexity and growth") {
  const Law eta(MixtureRV::from(BoundParams(1.0, 1.0, 0.3)));
  for (double alpha : {2.0, 3.0}) {
    double prev = pos_moment(eta, -4.0, alpha);
    double prev_diff = -1e300;
    for (double w = -3.9; w < 6.0; w += 0.1) {
      const double v = pos_moment(eta, w, alpha);
      CHECK(v <= prev);
      const double diff = v - prev;
      CHECK(diff >= prev_diff - 1e-12);
      prev_diff = diff;
      prev = v;
    }
  }
  const double w = -30.0 * eta.stddev();
  CHECK(std::abs(pos_moment(eta, w, 1.0) - (0.0 - w)) <= 1e-8);
}

TEST_CASE("Gaussian variance ordering at fixed Poisson part") {
  for (double w : {-1.0, 0.0, 0.7, 2.0}) {
    double prev = 0.0;
    for (double v : {0.1, 0.4, 0.9, 1.6}) {
      const double e = pos_moment(Law(MixtureRV(v, 1.0, 0.3)), w, 2.0);
      CHECK(e >= prev);
      prev = e;
    }
  }
}

TEST_CASE("route agreement on random cases") {
  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const BoundParams p(0.5 + 1.5 * U(eng), 0.2 + 1.8 * U(eng), 0.05 + 0.9 * U(eng));
    const Law eta(MixtureRV::from(p));
    const double w = (U(eng) * 4.0 - 1.0) * p.sigma;
    const double alpha = U(eng) < 0.5 ? 2.0 : 3.0;
    const double s = pos_moment(eta, w, alpha);
    CHECK(rel_err(pos_moment(eta, w, alpha, PosMomentMethod::laplace()), s) <= 1e-6);
    CHECK(rel_err(pos_moment(eta, w, alpha, PosMomentMethod::charfn()), s) <= 1e-5);
  }
}

TEST_CASE("series route for alpha 4 to 6 matches the Laplace route") {
  const Law eta(MixtureRV::from(BoundParams(1.0, 0.7, 0.4)));
  for (double alpha : {4.0, 5.0, 6.0})
    for (double w : {-1.0, 0.5, 2.0}) {
      const double s = pos_moment(eta, w, alpha, PosMomentMethod::series());
      CHECK(rel_err(pos_moment(eta, w, alpha, PosMomentMethod::laplace()), s) <= 1e-6);
    }
}
