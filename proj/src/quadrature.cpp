#include "vdlab/quadrature.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vdlab/common.hpp"

namespace vdlab {
namespace {

struct Piece {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;

  bool operator<(const Piece& other) const { return error < other.error; }
};

Piece evaluate(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  Piece p{a, b};
  // max_depth 0: a single Kronrod panel with its Gauss error estimate.
  p.value = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
  if (!std::isfinite(p.value)) {
    std::ostringstream msg;
    msg << "quadrature produced a non-finite value on [" << a << ", " << b << "]";
    throw RuntimeError(msg.str());
  }
  return p;
}

}  // namespace

QuadratureResult integrate_piecewise(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                     double rel_tol, std::size_t max_intervals) {
  if (breakpoints.size() < 2) throw InputError("quadrature needs at least two breakpoints");
  if (!(rel_tol > 0.0)) throw InputError("quadrature tolerance must be positive");

  std::priority_queue<Piece> heap;
  std::vector<Piece> done;  // too narrow to split further
  QuadratureResult total;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const double a = breakpoints[i - 1];
    const double b = breakpoints[i];
    if (!(b > a)) throw InputError("quadrature breakpoints must increase");
    const Piece p = evaluate(f, a, b);
    total.value += p.value;
    total.error += p.error;
    total.l1 += p.l1;
    heap.push(p);
  }

  while (!heap.empty() && total.error > rel_tol * total.l1) {
    if (heap.size() + done.size() >= max_intervals) {
      const Piece& worst = heap.top();
      std::ostringstream msg;
      msg.precision(6);
      msg << "quadrature did not converge: estimated error " << total.error << " exceeds " << rel_tol << " * L1 ("
          << total.l1 << ") after " << max_intervals << " intervals; worst interval [" << worst.a << ", " << worst.b
          << "] carries error " << worst.error;
      throw RuntimeError(msg.str());
    }
    const Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      done.push_back(p);
      continue;
    }
    const Piece left = evaluate(f, p.a, mid);
    const Piece right = evaluate(f, mid, p.b);
    total.value += left.value + right.value - p.value;
    total.error += left.error + right.error - p.error;
    total.l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the leaves so the running updates leave no drift.
  QuadratureResult exact;
  auto add = [&exact](const Piece& p) {
    exact.value += p.value;
    exact.error += p.error;
    exact.l1 += p.l1;
    ++exact.intervals;
  };
  for (const auto& p : done) add(p);
  while (!heap.empty()) {
    add(heap.top());
    heap.pop();
  }
  if (exact.error > rel_tol * exact.l1) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "quadrature stalled at roundoff: estimated error " << exact.error << " exceeds " << rel_tol << " * L1 ("
        << exact.l1 << ") over [" << breakpoints.front() << ", " << breakpoints.back() << "]";
    throw RuntimeError(msg.str());
  }
  return exact;
}

}  // namespace vdlab
