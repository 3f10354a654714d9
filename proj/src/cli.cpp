#include "tailbound/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>

#include "tailbound/bounds.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/numerics.hpp"
#include "tailbound/oracle.hpp"
#include "tailbound/validation.hpp"

namespace tailbound::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string bound;
  std::optional<double> sigma, y, eps, x;
  double x_min = 0.0, x_max = 0.0;
  long points = 0;
  bool parametric = false;
  long m = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string suite;
  int digits = 12;
};

Tolerance default_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv("TAILBOUND_TOL_REL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0 && v < 1.0))
      throw UsageError(fmt::format("TAILBOUND_TOL_REL must be a number in (0, 1), got '{}'", env));
    tol.rel = v;
  }
  return tol;
}

double need(const std::optional<double>& v, const char* flag, const std::string& bound) {
  if (!v) throw UsageError(fmt::format("bound '{}' requires {}", bound, flag));
  return *v;
}

// Evaluates one named bound at x.
struct Evaluator {
  std::string bound;
  std::optional<double> sigma, y, eps;
  Tolerance tol;

  double operator()(double x) const {
    const double s = need(sigma, "--sigma", bound);
    if (bound == "ca") return ca(s, x);
    if (bound == "en") return en(s, x);
    if (bound == "ea") return x > 0.0 ? ea(x / s).value : 1.0;
    const double yy = need(y, "--y", bound);
    if (bound == "bh") return tailbound::bh(s, yy, x).value;
    if (bound == "be") return tailbound::be(s, yy, x, PosMomentMethod::automatic(), tol).value;
    const BoundParams p(s, yy, need(eps, "--eps", bound));
    if (bound == "pu") return tailbound::pu(p, x).value;
    if (bound == "pin") return tailbound::pin(p, x, PosMomentMethod::automatic(), tol).value;
    if (bound == "lc3") return lc3_bound(p, x, tol);
    throw UsageError(fmt::format("unknown bound '{}'", bound));
  }
};

std::string num(double v, int digits) { return fmt::format("{:.{}e}", v, digits); }

void eval_command(const Options& o, std::ostream& out) {
  const Evaluator f{o.bound, o.sigma, o.y, o.eps, default_tolerance()};
  const double x = need(o.x, "--x", o.bound);
  const double v = f(x);
  out << "x," << o.bound << '\n' << num(x, o.digits) << ',' << num(v, o.digits) << '\n';
}

// Law and exponent of the P_alpha representation of be and pin.
std::pair<Law, double> p_alpha_law(const Options& o) {
  const double s = need(o.sigma, "--sigma", o.bound);
  const double y = need(o.y, "--y", o.bound);
  if (o.bound == "be") return {Law(MixtureRV::poisson(y, s * s / (y * y))), 2.0};
  if (o.bound == "pin") return {Law(MixtureRV::from(BoundParams(s, y, need(o.eps, "--eps", o.bound)))), 3.0};
  throw UsageError("--parametric is available for the be and pin bounds only");
}

void sweep_command(const Options& o, std::ostream& out) {
  if (o.points < 2) throw UsageError("--points must be at least 2");
  if (!(o.x_min < o.x_max)) throw UsageError("--x-min must be below --x-max");
  const Tolerance tol = default_tolerance();
  std::vector<std::string> rows(o.points);
  if (!o.parametric) {
    const Evaluator f{o.bound, o.sigma, o.y, o.eps, tol};
    f(o.x_min);  // reports missing parameters before the parallel loop
    numerics::parallel_for(o.points, [&](long i) {
      const double x = o.x_min + (o.x_max - o.x_min) * static_cast<double>(i) / static_cast<double>(o.points - 1);
      rows[i] = num(x, o.digits) + ',' + num(f(x), o.digits);
    });
    out << "x," << o.bound << '\n';
  } else {
    // x = m(t) along t = u - 1/u, so only the endpoints need a root solve.
    const auto [law, alpha] = p_alpha_law(o);
    if (!(o.x_max > law.mean())) throw UsageError("--x-max must exceed the mean for --parametric");
    const auto u_of = [&](double x) {
      const double t = solve_t_x(law, alpha, x, PosMomentMethod::automatic(), tol);
      return 0.5 * (t + std::sqrt(t * t + 4.0));
    };
    const double u_lo = o.x_min > law.mean() ? u_of(o.x_min) : 0.1;
    const double u_hi = u_of(o.x_max);
    if (!(u_lo < u_hi)) throw UsageError("empty parametric range");
    numerics::parallel_for(o.points, [&](long i) {
      const double u = u_lo + (u_hi - u_lo) * static_cast<double>(i) / static_cast<double>(o.points - 1);
      const double t = u - 1.0 / u;
      const double x = m_function(law, alpha, t, PosMomentMethod::automatic(), tol);
      const double v = std::min(1.0, pos_moment(law, t, alpha, PosMomentMethod::automatic(), tol) /
                                         std::pow(x - t, alpha));
      rows[i] = num(x, o.digits) + ',' + num(t, o.digits) + ',' + num(v, o.digits);
    });
    out << "x,t," << o.bound << '\n';
  }
  for (const auto& r : rows) out << r << '\n';
}

void compare_command(const Options& o, std::ostream& out) {
  if (o.points < 1) throw UsageError("--points must be positive");
  if (!(o.x_max > 0.0)) throw UsageError("--x-max must be positive");
  const Tolerance tol = default_tolerance();
  const BoundParams p(need(o.sigma, "--sigma", "compare"), need(o.y, "--y", "compare"),
                      need(o.eps, "--eps", "compare"));
  std::vector<std::string> rows(o.points);
  numerics::parallel_for(o.points, [&](long i) {
    const double x = o.x_max * static_cast<double>(i + 1) / static_cast<double>(o.points);
    const double b = bh(p.sigma, p.y, x).value;
    const double u = pu(p, x).value;
    const double e = be(p, x, PosMomentMethod::automatic(), tol).value;
    const double n = pin(p, x, PosMomentMethod::automatic(), tol).value;
    std::string r;
    for (double v : {x, b, u, e, n, ca(p.sigma, x), en(p.sigma, x)}) r += num(v, o.digits) + ',';
    r += num(std::log10(u / b), o.digits) + ',' + num(std::log10(e / b), o.digits) + ',' +
         num(std::log10(n / b), o.digits);
    rows[i] = std::move(r);
  });
  out << "x,BH,PU,Be,Pin,Ca,EN,log10_PU_BH,log10_Be_BH,log10_Pin_BH\n";
  for (const auto& r : rows) out << r << '\n';
}

void extremal_command(const Options& o, std::ostream& out) {
  const BoundParams p(need(o.sigma, "--sigma", "extremal"), need(o.y, "--y", "extremal"),
                      need(o.eps, "--eps", "extremal"));
  const double x = need(o.x, "--x", "extremal");
  const auto e = extremal_sum(p, o.m);
  const auto mc = mc_tail(e.spec, x, o.samples, o.seed);
  const double bound = pin(p, x, PosMomentMethod::automatic(), default_tolerance()).value;
  out << "m,b,a,x,p_hat,std_error,Pin\n"
      << e.m << ',' << num(e.b, o.digits) << ',' << num(e.a, o.digits) << ',' << num(x, o.digits) << ','
      << num(mc.p_hat, o.digits) << ',' << num(mc.std_error, o.digits) << ',' << num(bound, o.digits) << '\n';
}

int validate_command(const Options& o, std::ostream& out) {
  validation::Suite suite;
  if (o.suite == "quick") suite = validation::Suite::quick;
  else if (o.suite == "full") suite = validation::Suite::full;
  else throw UsageError("--suite must be quick or full");
  out << "id,passed,seconds,name,detail\n";
  bool ok = true;
  validation::run_suite(suite, o.seed, [&](const validation::CriterionResult& r) {
    ok = ok && r.passed;
    out << r.id << ',' << (r.passed ? "pass" : "fail") << ',' << fmt::format("{:.3f}", r.seconds) << ",\""
        << r.name << "\",\"" << r.detail << "\"\n";
    out.flush();
  });
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Tail bounds for sums of bounded independent random variables", "tailbound"};
  app.require_subcommand(1);
  const auto add_params = [&](CLI::App* c, bool eps) {
    c->add_option("--sigma", o.sigma, "standard deviation of the sum");
    c->add_option("--y", o.y, "upper bound on each summand");
    if (eps) c->add_option("--eps", o.eps, "third-moment fraction in (0, 1)");
  };
  const auto add_digits = [&](CLI::App* c) {
    c->add_option("--digits", o.digits, "digits after the decimal point")->check(CLI::Range(1, 17));
  };
  const std::vector<std::string> bounds{"bh", "pu", "be", "pin", "ca", "en", "ea", "lc3"};

  auto* eval = app.add_subcommand("eval", "evaluate one bound at x");
  eval->add_option("--bound", o.bound)->required()->check(CLI::IsMember(bounds));
  add_params(eval, true);
  eval->add_option("--x", o.x)->required();
  add_digits(eval);

  auto* sweep = app.add_subcommand("sweep", "evaluate one bound on an x grid");
  sweep->add_option("--bound", o.bound)->required()->check(CLI::IsMember(bounds));
  add_params(sweep, true);
  sweep->add_option("--x-min", o.x_min)->required();
  sweep->add_option("--x-max", o.x_max)->required();
  sweep->add_option("--points", o.points)->required();
  sweep->add_flag("--parametric", o.parametric, "grid in u with x = m(u - 1/u)");
  add_digits(sweep);

  auto* compare = app.add_subcommand("compare", "all bounds and their ratios to BH");
  add_params(compare, true);
  compare->add_option("--x-max", o.x_max)->required();
  compare->add_option("--points", o.points)->required();
  add_digits(compare);

  auto* extremal = app.add_subcommand("extremal", "Monte Carlo tail of the extremal sum");
  add_params(extremal, true);
  extremal->add_option("--m", o.m)->required();
  extremal->add_option("--x", o.x)->required();
  extremal->add_option("--samples", o.samples)->required();
  extremal->add_option("--seed", o.seed)->required();
  add_digits(extremal);

  auto* validate = app.add_subcommand("validate", "run the acceptance criteria");
  validate->add_option("--suite", o.suite)->required()->check(CLI::IsMember({"quick", "full"}));
  validate->add_option("--seed", o.seed)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) eval_command(o, out);
    else if (sweep->parsed()) sweep_command(o, out);
    else if (compare->parsed()) compare_command(o, out);
    else if (extremal->parsed()) extremal_command(o, out);
    else return validate_command(o, out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tailbound::cli
