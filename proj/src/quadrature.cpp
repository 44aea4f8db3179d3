#include "lgl/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "lgl/error.hpp"

namespace lgl::quad {
namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kNodes[k];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrod[k] * pair;
    if (k % 2 == 1) gauss += kGauss[k / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                     double abs_tol, double rel_tol, int max_intervals) {
  if (breakpoints.size() < 2) throw InvalidArgument("integrate: need at least two breakpoints");
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (breakpoints[k] > breakpoints[k + 1]) {
      throw InvalidArgument("integrate: breakpoints must be nondecreasing");
    }
    if (breakpoints[k] == breakpoints[k + 1]) continue;
    Segment s = gauss_kronrod(f, breakpoints[k], breakpoints[k + 1]);
    total += s.value;
    error += s.error;
    heap.push(s);
  }
  if (heap.empty()) return {};

  auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::fabs(total)); };
  while (!(error <= tolerance())) {
    if (static_cast<int>(heap.size()) >= max_intervals || !std::isfinite(total) ||
        !std::isfinite(error)) {
      std::ostringstream msg;
      msg << "quadrature did not reach tolerance: estimate " << total << ", error " << error
          << ", tolerance " << tolerance();
      throw QuadratureError(msg.str());
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      throw QuadratureError("quadrature interval cannot be subdivided further");
    }
    heap.pop();
    const Segment left = gauss_kronrod(f, worst.lo, mid);
    const Segment right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift accumulated by the incremental updates.
  QuadResult result;
  result.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    result.value += heap.top().value;
    result.abs_error += heap.top().error;
    heap.pop();
  }
  return result;
}

}  // namespace lgl::quad
