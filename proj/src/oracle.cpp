#include "tailbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "tailbound/errors.hpp"
#include "tailbound/numerics.hpp"
#include "tailbound/posmoments.hpp"

namespace tailbound {

namespace {

constexpr long kBlock = 1L << 16;

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

struct Neumaier {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

// Identical summands collapsed into binomial counts.
struct Group {
  double a;
  double b;
  long count;
  std::vector<double> pmf;  // P(K = k), K ~ Bin(count, a / (a + b)) upward jumps
  std::vector<double> cdf;
};

std::vector<Group> make_groups(const SumSpec& spec) {
  std::map<std::pair<double, double>, long> counts;
  for (const auto& s : spec.summands) ++counts[{s.a, s.b}];
  std::vector<Group> groups;
  for (const auto& [ab, c] : counts) {
    Group g{ab.first, ab.second, c, {}, {}};
    const double p = g.a / (g.a + g.b);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lc = std::lgamma(static_cast<double>(c) + 1.0);
    g.pmf.resize(c + 1);
    g.cdf.resize(c + 1);
    double acc = 0.0;
    for (long k = 0; k <= c; ++k) {
      const double kd = static_cast<double>(k);
      g.pmf[k] = std::exp(lc - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(c - k) + 1.0) +
                          kd * lp + static_cast<double>(c - k) * lq);
      acc += g.pmf[k];
      g.cdf[k] = acc;
    }
    for (auto& v : g.cdf) v /= acc;
    groups.push_back(std::move(g));
  }
  return groups;
}

double group_value(const Group& g, long k) {
  return -static_cast<double>(g.count) * g.a + static_cast<double>(k) * (g.a + g.b);
}

// Draws one sum from a per-block engine.
double draw_sum(const std::vector<Group>& groups, std::mt19937_64& eng) {
  double s = 0.0;
  for (const auto& g : groups) {
    const double u = std::generate_canonical<double, 64>(eng);
    long k = std::upper_bound(g.cdf.begin(), g.cdf.end(), u) - g.cdf.begin();
    k = std::min(k, g.count);
    s += group_value(g, k);
  }
  return s;
}

std::mt19937_64 block_engine(std::uint64_t seed, long block) {
  const auto b = static_cast<std::uint64_t>(block);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SumSpec::SumSpec(std::vector<TwoPointRV> s, double cap) : summands(std::move(s)), y_cap(cap) {
  if (!(std::isfinite(y_cap) && y_cap > 0.0)) throw DomainError("SumSpec: y_cap must be positive");
  for (const auto& x : summands)
    if (x.b > y_cap * (1.0 + 1e-12)) throw DomainError("SumSpec: summand exceeds y_cap");
}

double SumSpec::variance() const {
  double v = 0.0;
  for (const auto& x : summands) v += x.variance();
  return v;
}

double SumSpec::positive_third_moment() const {
  double v = 0.0;
  for (const auto& x : summands) v += x.positive_third_moment();
  return v;
}

BoundParams matched_params(const SumSpec& spec) {
  const double s2 = spec.variance();
  if (!(s2 > 0.0)) throw DomainError("matched_params: empty or degenerate sum");
  return BoundParams(std::sqrt(s2), spec.y_cap, spec.positive_third_moment() / (s2 * spec.y_cap));
}

SumSpec random_sum_spec(std::uint64_t seed, int n, double y_cap) {
  if (n < 1) throw DomainError("random_sum_spec: n must be positive");
  if (!(y_cap > 0.0)) throw DomainError("random_sum_spec: y_cap must be positive");
  auto eng = block_engine(seed, -1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TwoPointRV> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double yi = y_cap * (0.1 + 0.9 * unit(eng));
    const double si = 0.1 + 0.9 * unit(eng);
    const double cap = yi * yi * yi * si * si / (yi * yi + si * si);
    xs.push_back(extremal_two_point(si, yi, cap * (0.02 + 0.98 * unit(eng))));
  }
  return SumSpec(std::move(xs), y_cap);
}

TestFunction TestFunction::power_part(double t, double alpha) {
  if (!std::isfinite(t) || !(alpha >= 3.0)) throw DomainError("power_part: needs finite t and alpha >= 3");
  return {Kind::power_part, t, alpha, 0.0};
}

TestFunction TestFunction::power_part2(double t, double alpha) {
  if (!std::isfinite(t) || !(alpha >= 2.0)) throw DomainError("power_part2: needs finite t and alpha >= 2");
  return {Kind::power_part2, t, alpha, 0.0};
}

TestFunction TestFunction::exponential(double lambda) {
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw DomainError("exponential: lambda must be positive");
  return {Kind::exponential, 0.0, 0.0, lambda};
}

double TestFunction::operator()(double x) const {
  if (kind == Kind::exponential) return std::exp(lambda * x);
  return x > t ? std::pow(x - t, alpha) : 0.0;
}

TwoPointRV extremal_two_point(double sigma, double y, double beta) {
  if (!(sigma > 0.0) || !(y > 0.0)) throw DomainError("extremal_two_point: sigma and y must be positive");
  const double s2 = sigma * sigma;
  const double cap = y * y * y * s2 / (y * y + s2);
  if (!(beta > 0.0) || beta > cap * (1.0 + 1e-12))
    throw DomainError("extremal_two_point: beta outside (0, y^3 sigma^2 / (y^2 + sigma^2)]");
  double b = y;
  if (beta < cap) {
    auto h = [&](double t) { return s2 * t * t * t - beta * (t * t + s2); };
    b = numerics::find_root(h, 0.0, y, 1e-15);
  }
  const TwoPointRV rv(s2 / b, b);
  if (!close_rel(rv.variance(), s2, 1e-10) || !close_rel(rv.positive_third_moment(), beta, 1e-10))
    throw ConstructionError("extremal_two_point: moment identities not met");
  return rv;
}

ExtremalSum extremal_sum(const BoundParams& p, long m) {
  if (m < 1) throw DomainError("extremal_sum: m must be positive");
  const double s2 = p.variance();
  const double y = p.y;
  const double md = static_cast<double>(m);
  const double target = p.beta();
  auto h = [&](double b) {
    const double a = (s2 - b * b) / y;
    return b * b * b / (2.0 * std::sqrt(md)) + md * a * y * y * y / (a + md * y) - target;
  };
  const double h0 = h(0.0);
  const double h1 = h(p.sigma);
  if ((h0 > 0.0) == (h1 > 0.0)) throw ConstructionError("extremal_sum: no solution at this m");
  const double b = numerics::find_root(h, 0.0, p.sigma, 1e-15);
  const double a = (s2 - b * b) / y;
  const double c = b / std::sqrt(md);
  if (!(a > 0.0) || !(c > 0.0) || c > y) throw ConstructionError("extremal_sum: degenerate solution");
  std::vector<TwoPointRV> xs;
  xs.reserve(2 * m);
  for (long i = 0; i < m; ++i) xs.emplace_back(c, c);
  for (long i = 0; i < m; ++i) xs.emplace_back(a / md, y);
  SumSpec spec(std::move(xs), y);
  const double var = md * c * c + md * (a / md) * y;
  const double third = md * c * c * c / 2.0 + md * (a / md) * y * y * y / (a / md + y);
  if (!close_rel(var, s2, 1e-8) || !close_rel(third, target, 1e-8))
    throw ConstructionError("extremal_sum: aggregate moments not met");
  return {b, a, m, std::move(spec)};
}

SumSpec extremal_sum_spec(const BoundParams& p, long m) { return extremal_sum(p, m).spec; }

double enumerate_expectation(const SumSpec& spec, const TestFunction& f) {
  const std::size_t n = spec.summands.size();
  if (n > 24) throw SizeError("enumerate_expectation: more than 24 summands");
  Neumaier acc;
  // Depth-first walk over all sign patterns.
  auto walk = [&](auto&& self, std::size_t i, double s, double w) -> void {
    if (i == n) {
      acc.add(w * f(s));
      return;
    }
    const auto& x = spec.summands[i];
    self(self, i + 1, s - x.a, w * x.prob_low());
    self(self, i + 1, s + x.b, w * x.prob_high());
  };
  walk(walk, 0, 0.0, 1.0);
  return acc.value();
}

double grouped_expectation(const SumSpec& spec, const TestFunction& f, double max_terms) {
  const auto groups = make_groups(spec);
  double terms = 1.0;
  for (const auto& g : groups) terms *= static_cast<double>(g.count + 1);
  if (terms > max_terms) throw SizeError("grouped_expectation: too many terms");
  Neumaier acc;
  auto walk = [&](auto&& self, std::size_t i, double s, double w) -> void {
    if (i == groups.size()) {
      acc.add(w * f(s));
      return;
    }
    const auto& g = groups[i];
    for (long k = 0; k <= g.count; ++k) {
      if (g.pmf[k] == 0.0) continue;
      self(self, i + 1, s + group_value(g, k), w * g.pmf[k]);
    }
  };
  walk(walk, 0, 0.0, 1.0);
  return acc.value();
}

double mixture_expectation_f(const BoundParams& p, const TestFunction& f) {
  if (f.kind == TestFunction::Kind::exponential) return pu_exp(p, f.lambda);
  return pos_moment(Law(MixtureRV::from(p)), f.t, f.alpha);
}

double poisson_expectation_f(double sigma, double y, const TestFunction& f) {
  if (f.kind == TestFunction::Kind::exponential) return bh_exp(sigma, y, f.lambda);
  return pos_moment(Law(MixtureRV::poisson(y, sigma * sigma / (y * y))), f.t, f.alpha);
}

MCEstimate mc_tail(const SumSpec& spec, double x, long n, std::uint64_t seed, unsigned threads) {
  if (n < 1000) throw DomainError("mc_tail: at least 1000 samples required");
  const auto groups = make_groups(spec);
  const long blocks = (n + kBlock - 1) / kBlock;
  std::vector<long> hits(blocks, 0);
  numerics::parallel_for(
      blocks,
      [&](long blk) {
        auto eng = block_engine(seed, blk);
        const long end = std::min(n, (blk + 1) * kBlock);
        long h = 0;
        for (long i = blk * kBlock; i < end; ++i)
          if (draw_sum(groups, eng) >= x) ++h;
        hits[blk] = h;
      },
      threads);
  long total = 0;
  for (long h : hits) total += h;
  MCEstimate r;
  r.n = n;
  r.seed = seed;
  r.p_hat = static_cast<double>(total) / static_cast<double>(n);
  r.std_error = std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(n));
  return r;
}

MCMean mc_expectation(const SumSpec& spec, const TestFunction& f, long n, std::uint64_t seed,
                      unsigned threads) {
  if (n < 1000) throw DomainError("mc_expectation: at least 1000 samples required");
  const auto groups = make_groups(spec);
  const long blocks = (n + kBlock - 1) / kBlock;
  std::vector<Neumaier> s1(blocks), s2(blocks);
  numerics::parallel_for(
      blocks,
      [&](long blk) {
        auto eng = block_engine(seed, blk);
        const long end = std::min(n, (blk + 1) * kBlock);
        for (long i = blk * kBlock; i < end; ++i) {
          const double v = f(draw_sum(groups, eng));
          s1[blk].add(v);
          s2[blk].add(v * v);
        }
      },
      threads);
  Neumaier t1, t2;
  for (long b = 0; b < blocks; ++b) {
    t1.add(s1[b].value());
    t2.add(s2[b].value());
  }
  const double nd = static_cast<double>(n);
  MCMean r;
  r.n = n;
  r.seed = seed;
  r.mean = t1.value() / nd;
  const double var = std::max(0.0, t2.value() / nd - r.mean * r.mean);
  r.std_error = std::sqrt(var / nd);
  return r;
}

double hp_counterexample_gap(double p, double a) {
  if (!(p > 2.0 && p <= 3.0)) throw DomainError("hp_counterexample_gap: p must lie in (2, 3]");
  if (!(a > 0.0 && a < 1.0)) throw DomainError("hp_counterexample_gap: a must lie in (0, 1)");
  // sigma^2 = a, y = 1, eps = 1 / (1 + a)
  const MixtureRV eta(a * a / (1.0 + a), 1.0, a / (1.0 + a));
  Tolerance tol;
  tol.rel = 1e-12;
  const double e2 = pos_moment(Law(eta), -a, p, PosMomentMethod::automatic(), tol);
  const double e1 = pos_moment(Law(TwoPointRV(a, 1.0)), -a, p);
  return e2 - e1;
}

}  // namespace tailbound
