#include "tailbound/validation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>

#include "tailbound/bounds.hpp"
#include "tailbound/distributions.hpp"
#include "tailbound/numerics.hpp"
#include "tailbound/oracle.hpp"
#include "tailbound/posmoments.hpp"

namespace tailbound::validation {

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Shared (sigma, y, eps, x) grid: 3 x 3 x 3 x 10 points.
template <class F>
void for_each_grid_point(F&& f) {
  for (double s : {0.5, 1.0, 2.0})
    for (double y : {0.3, 1.0, 3.0})
      for (double e : {0.1, 0.5, 0.9})
        for (int i = 1; i <= 10; ++i) f(BoundParams(s, y, e), 0.5 * s * i);
}

Outcome crossing() {
  const double u = numerics::find_root([](double x) { return ca(1.0, x) - en(1.0, x); }, 1.0, 2.0, 1e-10);
  return {u > 1.585 && u < 1.586, fmt::format("u0+ = {:.10f}", u)};
}

Outcome be_equals_ca() {
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0})
    for (double y : {0.5, 1.0, 2.0})
      for (int i = 0; i < 20; ++i) {
        const double x = y * i / 19.0;
        const double c = ca(s, x);
        worst = std::max(worst, std::abs(be(s, y, x).value - c) / c);
      }
  return {worst <= 1e-8, fmt::format("max rel diff {:.3e}", worst)};
}

Outcome paper_ratios() {
  const auto ratio = [](double eps, double y, double x) {
    const BoundParams p(1.0, y, eps);
    return be(p, x).value / pin(p, x).value;
  };
  const double r1 = ratio(0.1, 1.0, 4.0);
  const double r2 = ratio(0.1, 0.1, 3.0);
  const double r3 = 1.0 / ratio(0.9, 1.0, 4.0);
  const double r4 = 1.0 / ratio(0.9, 0.1, 3.0);
  const bool ok = in_range(r1, 9.4, 10.5) && in_range(r2, 1.15, 1.25) && in_range(r3, 1.05, 1.11) &&
                  in_range(r4, 1.08, 1.16);
  return {ok, fmt::format("Be/Pin {:.4f}, {:.4f}; Pin/Be {:.4f}, {:.4f}", r1, r2, r3, r4)};
}

Outcome pu_closed_vs_numeric() {
  double worst = 0.0;
  for_each_grid_point([&](const BoundParams& p, double x) {
    worst = std::max(worst, rel_diff(pu_numeric(p, x).value, pu(p, x).value));
  });
  return {worst <= 1e-8, fmt::format("max rel diff {:.3e}", worst)};
}

Outcome split_identity() {
  double worst = 0.0;
  for_each_grid_point([&](const BoundParams& p, double x) {
    const double a = alpha_x_split(p, x);
    worst = std::max(worst, rel_diff(split_product(p, x, a), pu(p, x).value));
  });
  return {worst <= 1e-8, fmt::format("max rel diff {:.3e}", worst)};
}

Outcome route_agreement(int cases, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_laplace = 0.0, worst_charfn = 0.0;
  for (int i = 0; i < cases; ++i) {
    const BoundParams p(0.5 + 1.5 * unit(eng), 0.2 + 1.8 * unit(eng), 0.05 + 0.9 * unit(eng));
    const Law eta(MixtureRV::from(p));
    const double w = (4.0 * unit(eng) - 1.0) * p.sigma;
    const double alpha = unit(eng) < 0.5 ? 2.0 : 3.0;
    const double s = pos_moment(eta, w, alpha, PosMomentMethod::series());
    worst_laplace = std::max(worst_laplace, rel_diff(pos_moment(eta, w, alpha, PosMomentMethod::laplace()), s));
    worst_charfn = std::max(worst_charfn, rel_diff(pos_moment(eta, w, alpha, PosMomentMethod::charfn()), s));
  }
  return {worst_laplace <= 1e-6 && worst_charfn <= 1e-5,
          fmt::format("{} cases, laplace {:.3e}, charfn {:.3e}", cases, worst_laplace, worst_charfn)};
}

Outcome ordering() {
  long violations = 0, checks = 0;
  for_each_grid_point([&](const BoundParams& p, double x) {
    const double b = bh(p.sigma, p.y, x).value;
    const double u = pu(p, x).value;
    const double pn = pin(p, x).value;
    const double e = be(p, x).value;
    checks += 3;
    if (pn > u * (1 + 1e-9)) ++violations;
    if (u > b * (1 + 1e-12)) ++violations;
    if (e > std::min(ca(p.sigma, x), b) * (1 + 1e-9)) ++violations;
  });
  const std::vector<double> alphas{1.5, 2.0, 2.5, 3.0, 4.0, 6.0};
  const std::vector<Law> laws{Law(MixtureRV::from(BoundParams(1.0, 1.0, 0.3))),
                              Law(TwoPointRV(1.0, 2.0)), Law(MixtureRV::poisson(1.0, 0.8))};
  for (const auto& law : laws) {
    const double top = std::isfinite(law.sup()) ? law.sup() : 6.0 * law.stddev();
    for (int i = 1; i <= 8; ++i) {
      const double x = top * i / 9.0;
      double prev = 0.0;
      for (double a : alphas) {
        const double v = p_alpha(law, a, x).value;
        ++checks;
        if (v < prev * (1 - 1e-9)) ++violations;
        prev = v;
      }
    }
    for (double a : alphas) {
      double prev = 1.0 + 1e-300;
      for (int i = 1; i <= 8; ++i) {
        const double v = p_alpha(law, a, top * i / 9.0).value;
        ++checks;
        if (!(v < prev)) ++violations;
        prev = v;
      }
    }
  }
  return {violations == 0, fmt::format("{} violations in {} checks", violations, checks)};
}

std::vector<TestFunction> comparison_functions() {
  std::vector<TestFunction> fs;
  for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) fs.push_back(TestFunction::power_part(t));
  for (double l : {0.5, 1.0, 2.0}) fs.push_back(TestFunction::exponential(l));
  return fs;
}

Outcome comparison(int specs, std::uint64_t seed) {
  const auto fs = comparison_functions();
  long violations = 0;
  double worst = -1e300;
  for (int k = 0; k < specs; ++k) {
    const auto spec = random_sum_spec(seed * 1000 + k, 1 + k % 12, 0.5 + 0.25 * (k % 7));
    const BoundParams p = matched_params(spec);
    for (const auto& f : fs) {
      const double lhs = enumerate_expectation(spec, f);
      const double rhs = mixture_expectation_f(p, f);
      worst = std::max(worst, lhs / rhs);
      if (lhs > rhs * (1 + 1e-6)) ++violations;
    }
  }
  return {violations == 0,
          fmt::format("{} specs x {} functions, {} violations, max ratio {:.6f}", specs, fs.size(),
                      violations, worst)};
}

Outcome tightness(long samples, std::uint64_t seed) {
  const BoundParams p(1.0, 1.0, 0.1);
  const auto f = TestFunction::power_part(1.0);
  const double target = mixture_expectation_f(p, f);
  double dev[2];
  bool mc_ok = true;
  std::string mc_text;
  const long ms[2] = {400, 1600};
  for (int i = 0; i < 2; ++i) {
    const auto spec = extremal_sum_spec(p, ms[i]);
    const double exact = grouped_expectation(spec, f);
    const auto mc = mc_expectation(spec, f, samples, seed + i);
    dev[i] = std::abs(exact / target - 1.0);
    if (std::abs(mc.mean - exact) > 4.0 * mc.std_error) mc_ok = false;
    mc_text += fmt::format(", MC m={} {:.5f}+-{:.1e}", ms[i], mc.mean / target, mc.std_error / target);
  }
  return {dev[1] < dev[0] && dev[1] <= 0.1 && mc_ok,
          fmt::format("|ratio-1| m=400 {:.4e}, m=1600 {:.4e}{}", dev[0], dev[1], mc_text)};
}

Outcome hp_gap() {
  const double g1 = hp_counterexample_gap(2.5, 0.01);
  const double g5 = hp_counterexample_gap(2.5, 0.05);
  const double g3 = hp_counterexample_gap(3.0, 0.01);
  const double ga2 = (std::pow(2.0, 1.5) - 3.5) * 1e-4;
  const bool ok = g1 < 0.0 && in_range(g1 / ga2, 0.5, 2.0) && in_range(g5 / g1, 12.5, 50.0) && g3 >= -1e-6;
  return {ok, fmt::format("gap(2.5,0.01) {:.4e}, gap/(g a^2) {:.3f}, ratio a=0.05/0.01 {:.2f}, gap(3,0.01) {:.3e}",
                          g1, g1 / ga2, g5 / g1, g3)};
}

Outcome poisson_oscillation() {
  const double th = 0.6;
  const int k = 15;
  const Law pi(MixtureRV::poisson(1.0, th));
  const double p2 = p_alpha(pi, 2.0, k - th).value;
  const double ge = poisson_tail(th, k);
  const double gt = poisson_tail(th, k + 1);
  const double r1 = p2 / ge;
  const double r2 = ge / ((k / th) * gt);
  return {in_range(r1, 1.0, 1.15) && in_range(r2, 0.85, 1.15),
          fmt::format("P2/P(>=) {:.6f}, P(>=)/((k/theta)P(>)) {:.6f}", r1, r2)};
}

Outcome normal_constant() {
  const double p3 = p_alpha(Law(MixtureRV::gaussian(1.0)), 3.0, 8.0).value;
  const double r = p3 / normal_tail(1.0, 8.0) / c_const(3.0, 0.0);
  return {in_range(r, 0.9, 1.1), fmt::format("P3/Q(8)/c30 {:.6f}", r)};
}

Outcome pu_bh_decay() {
  const BoundParams p(1.0, 1.0, 0.5);
  double rates[3];
  const double xs[3] = {20.0, 40.0, 80.0};
  for (int i = 0; i < 3; ++i) rates[i] = std::pow(pu(p, xs[i]).value / bh(1.0, 1.0, xs[i]).value, 1.0 / xs[i]);
  const bool mono = rates[0] > rates[1] && rates[1] > rates[2];
  return {mono && in_range(rates[2], 0.8 * p.eps, 1.25 * p.eps),
          fmt::format("rates {:.5f}, {:.5f}, {:.5f}", rates[0], rates[1], rates[2])};
}

Outcome mc_consistency(long samples, std::uint64_t seed) {
  const BoundParams p(1.0, 1.0, 0.1);
  const auto mc = mc_tail(extremal_sum_spec(p, 400), 3.0, samples, seed);
  const double bound = pin(p, 3.0).value;
  const double floor = bound / (1e3 * std::pow(3.0, 2.5));
  return {mc.p_hat <= bound + 4.0 * mc.std_error && mc.p_hat >= floor,
          fmt::format("p_hat {:.5e} +- {:.1e}, Pin(3) {:.5e}", mc.p_hat, mc.std_error, bound)};
}

}  // namespace

std::vector<CriterionResult> run_suite(Suite suite, std::uint64_t seed,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  const bool full = suite == Suite::full;
  const long samples = full ? 10000000 : 1000000;
  struct Entry {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {1, "Cantelli/normal crossing", 1e-3, crossing},
      {2, "Be equals Ca on [0, y]", 1.0, be_equals_ca},
      {3, "Be/Pin ratios", 4.0, paper_ratios},
      {4, "PU closed form vs minimization", 5.0, pu_closed_vs_numeric},
      {5, "alpha_x split identity", 5.0, split_identity},
      {6, "positive-part moment routes", 30.0, [&] { return route_agreement(full ? 50 : 15, seed); }},
      {7, "bound ordering and P_alpha monotonicity", 10.0, ordering},
      {8, "comparison inequality", 60.0, [&] { return comparison(full ? 100 : 30, seed); }},
      {9, "tightness of extremal sums", 120.0, [&] { return tightness(samples, seed); }},
      {10, "H_p counterexample", 5.0, hp_gap},
      {11, "Poisson oscillation", 1.0, poisson_oscillation},
      {12, "normal constant", 1.0, normal_constant},
      {13, "PU/BH exponential rate", 1.0, pu_bh_decay},
      {14, "Monte Carlo consistency", 120.0, [&] { return mc_consistency(samples, seed); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.time_limit = e.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = e.run();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.time_limit) {
      r.passed = false;
      r.detail += fmt::format(" (time limit {:g} s exceeded)", r.time_limit);
    }
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace tailbound::validation
