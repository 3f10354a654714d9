#include <cmath>
#include <vector>

#include "doctest.h"
#include "tailbound/errors.hpp"
#include "tailbound/oracle.hpp"

using namespace tailbound;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("extremal_two_point") {
  const double cap = 1.0 * 4.0 / (1.0 + 4.0);  // y = 1, sigma = 2
  const auto top = extremal_two_point(2.0, 1.0, cap);
  CHECK(top.b == 1.0);
  CHECK(rel_err(top.a, 4.0) < 1e-14);
  const auto x = extremal_two_point(1.0, 1.0, 0.25);
  CHECK(rel_err(x.b, 0.72527008507203464923) < 1e-12);
  CHECK(rel_err(x.variance(), 1.0) < 1e-12);
  CHECK(rel_err(x.positive_third_moment(), 0.25) < 1e-12);
  CHECK_THROWS_AS(extremal_two_point(1.0, 1.0, 0.6), DomainError);
  CHECK_THROWS_AS(extremal_two_point(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("extremal_sum") {
  const BoundParams p(1.0, 1.0, 0.1);
  const auto e = extremal_sum(p, 400);
  CHECK(e.spec.summands.size() == 800);
  CHECK(rel_err(e.spec.variance(), 1.0) < 1e-8);
  CHECK(rel_err(e.spec.positive_third_moment(), 0.1) < 1e-8);
  double mean = 0.0;
  for (const auto& s : e.spec.summands) mean += s.mean();
  CHECK(std::abs(mean) < 1e-12);
  CHECK(rel_err(e.b, 0.96027185550913427308) < 1e-10);
  CHECK(rel_err(e.b, std::sqrt(0.9)) < 0.02);
  CHECK_THROWS_AS(extremal_sum(p, 1), ConstructionError);
  CHECK_THROWS_AS(extremal_sum(p, 0), DomainError);
}

TEST_CASE("enumerate_expectation") {
  const SumSpec one({TwoPointRV(1.0, 1.0)}, 1.0);
  CHECK(rel_err(enumerate_expectation(one, TestFunction::power_part(0.0)), 0.5) < 1e-15);
  const SumSpec two({TwoPointRV(1.0, 1.0), TwoPointRV(1.0, 1.0)}, 1.0);
  const double c = std::cosh(1.0);
  CHECK(rel_err(enumerate_expectation(two, TestFunction::exponential(1.0)), c * c) < 1e-14);
  CHECK(rel_err(c * c, 2.3811) < 1e-4);
  CHECK_THROWS_AS(enumerate_expectation(random_sum_spec(1, 25, 1.0), TestFunction::exponential(1.0)),
                  SizeError);
}

TEST_CASE("grouped and Monte Carlo expectations agree with enumeration") {
  const auto spec = random_sum_spec(42, 12, 1.0);
  for (const auto& f : {TestFunction::power_part(0.5), TestFunction::exponential(1.0)}) {
    const double exact = enumerate_expectation(spec, f);
    CHECK(rel_err(grouped_expectation(spec, f), exact) < 1e-12);
    const auto mc = mc_expectation(spec, f, 10000000, 11);
    CHECK(std::abs(mc.mean - exact) <= 4.0 * mc.std_error);
  }
}

TEST_CASE("mixture_expectation_f") {
  const BoundParams p(1.0, 1.0, 0.5);
  for (double l : {0.5, 1.0, 2.0})
    CHECK(mixture_expectation_f(p, TestFunction::exponential(l)) == pu_exp(p, l));
  CHECK(rel_err(mixture_expectation_f(p, TestFunction::power_part(1.0)), 0.20247702395466161124) < 1e-9);
  // Far below the support (eta - t)_+^3 = (eta - t)^3 and E (eta - t)^3 = k3 - 3 t s2 - t^3.
  const double t = -40.0;
  CHECK(rel_err(mixture_expectation_f(p, TestFunction::power_part(t)), 0.5 - 3.0 * t - t * t * t) < 1e-10);
}

TEST_CASE("mc_tail") {
  const auto spec = random_sum_spec(3, 8, 1.0);
  double lo = 0.0, hi = 0.0;
  for (const auto& s : spec.summands) {
    lo += s.a;
    hi += s.b;
  }
  const auto below = mc_tail(spec, -lo - 1.0, 5000, 1);
  CHECK(below.p_hat == 1.0);
  CHECK(below.std_error == 0.0);
  CHECK(mc_tail(spec, hi + 1e-9, 5000, 1).p_hat == 0.0);
  const auto a = mc_tail(spec, 0.5, 300000, 9, 1);
  const auto b = mc_tail(spec, 0.5, 300000, 9, 4);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.n == 300000);
  CHECK(a.seed == 9);
  CHECK(rel_err(a.std_error, std::sqrt(a.p_hat * (1 - a.p_hat) / a.n)) < 1e-15);
  CHECK(mc_tail(spec, 0.5, 300000, 10).p_hat != a.p_hat);
  CHECK_THROWS_AS(mc_tail(spec, 0.5, 999, 1), DomainError);
}

TEST_CASE("extremal sum tail stays below pin") {
  const BoundParams p(1.0, 1.0, 0.1);
  const auto spec = extremal_sum_spec(p, 400);
  const auto mc = mc_tail(spec, 3.0, 10000000, 5);
  const double bound = pin(p, 3.0).value;
  CHECK(mc.p_hat <= bound + 4.0 * mc.std_error);
}

TEST_CASE("comparison inequalities on random sums") {
  for (int k = 0; k < 20; ++k) {
    const auto spec = random_sum_spec(1000 + k, 1 + k % 12, 1.0 + 0.1 * k);
    const BoundParams p = matched_params(spec);
    CHECK(p.eps > 0.0);
    CHECK(p.eps < 1.0);
    for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const auto f = TestFunction::power_part(t);
      CHECK(enumerate_expectation(spec, f) <= mixture_expectation_f(p, f) * (1 + 1e-6));
      const auto f2 = TestFunction::power_part2(t);
      CHECK(enumerate_expectation(spec, f2) <= poisson_expectation_f(p.sigma, p.y, f2) * (1 + 1e-6));
    }
    for (double l : {0.5, 1.0, 2.0}) {
      const auto f = TestFunction::exponential(l);
      CHECK(enumerate_expectation(spec, f) <= mixture_expectation_f(p, f) * (1 + 1e-6));
    }
  }
}

TEST_CASE("extremal sums approach the mixture") {
  const BoundParams p(1.0, 1.0, 0.1);
  const auto f = TestFunction::power_part(1.0);
  const double target = mixture_expectation_f(p, f);
  const double d400 = std::abs(grouped_expectation(extremal_sum_spec(p, 400), f) / target - 1.0);
  const double d1600 = std::abs(grouped_expectation(extremal_sum_spec(p, 1600), f) / target - 1.0);
  CHECK(d400 <= 0.1);
  CHECK(d1600 < d400);
}

TEST_CASE("hp_counterexample_gap") {
  const double g1 = hp_counterexample_gap(2.5, 0.01);
  CHECK(g1 < 0.0);
  CHECK(rel_err(g1, -0.000059453479192682938507) < 1e-6);
  const double gp = std::pow(2.0, 1.5) - 3.5;
  CHECK(g1 / (gp * 1e-4) > 0.5);
  CHECK(g1 / (gp * 1e-4) < 2.0);
  const double g5 = hp_counterexample_gap(2.5, 0.05);
  CHECK(rel_err(g5, -0.0011664668034226860868) < 1e-6);
  CHECK(g5 / g1 > 12.5);
  CHECK(g5 / g1 < 50.0);
  const double g3 = hp_counterexample_gap(3.0, 0.01);
  CHECK(g3 >= -1e-6);
  CHECK(rel_err(g3, 1.7539743099721223194e-6) < 1e-5);
  CHECK_THROWS_AS(hp_counterexample_gap(2.0, 0.01), DomainError);
  CHECK_THROWS_AS(hp_counterexample_gap(2.5, 1.0), DomainError);
}
