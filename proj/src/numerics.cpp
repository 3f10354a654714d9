#include "tailbound/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <queue>
#include <limits>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "tailbound/errors.hpp"

namespace tailbound::numerics {

namespace {

// Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                   double abs_tol, int panels) {
  if (!(b >= a)) throw DomainError("integrate: empty or reversed interval");
  if (a == b) return {};
  panels = std::max(panels, 1);
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double lo, hi, value, error, l1;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto rule = [&](double lo, double hi) {
    Piece p{lo, hi, 0.0, 0.0, 0.0};
    p.value = GK::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
    p.error *= 0.5 * (hi - lo);  // reported on the reference interval [-1, 1]
    if (!std::isfinite(p.value)) throw NumericalError("integrate: non-finite integrand value");
    return p;
  };
  // Global adaptive bisection: always refine the piece with the largest error.
  std::priority_queue<Piece> heap;
  std::vector<Piece> done;
  double err = 0.0, l1 = 0.0, val = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const Piece p = rule(a + i * h, (i + 1 == panels) ? b : a + (i + 1) * h);
    err += p.error;
    l1 += p.l1;
    val += p.value;
    heap.push(p);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] { return std::max({abs_tol, rel_tol * std::abs(val), 50.0 * eps * l1}); };
  const std::size_t max_pieces = 200000;
  while (!heap.empty() && err > target()) {
    if (heap.size() + done.size() > max_pieces)
      throw NumericalError("integrate: subdivision limit reached", err);
    const Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi)) {
      done.push_back(p);
      continue;
    }
    const Piece left = rule(p.lo, mid);
    const Piece right = rule(mid, p.hi);
    err += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    val += left.value + right.value - p.value;
    heap.push(left);
    heap.push(right);
  }
  // Final sum in interval order.
  std::vector<Piece> all = std::move(done);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  Accumulator value;
  double error = 0.0;
  for (const auto& p : all) {
    value.add(p.value);
    error += p.error;
  }
  const double total = value.value();
  if (error > std::max({abs_tol, rel_tol * std::abs(total), 50.0 * eps * l1}))
    throw NumericalError("integrate: error estimate above tolerance", error);
  return {total, error};
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("find_root: bracket has no sign change");
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto stop = [rel_tol](double x0, double x1) {
    return std::abs(x1 - x0) <= rel_tol * std::max(std::abs(x0), std::abs(x1)) ||
           std::abs(x1 - x0) <= 4.0 * std::numeric_limits<double>::min();
  };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  if (iters >= static_cast<std::uintmax_t>(max_iter))
    throw NumericalError("find_root: iteration limit reached", r.second - r.first);
  return 0.5 * (r.first + r.second);
}

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Minimum minimize(const std::function<double(double)>& f, double lo, double hi, int max_iter) {
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 52, iters);
  return {r.first, r.second};
}

void parallel_for(long n, const std::function<void(long)>& body, unsigned threads) {
  if (n <= 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, n));
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tailbound::numerics
