#include "thermofid/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "thermofid/errors.hpp"

namespace thermofid::quadrature {
namespace {

struct Panel {
  double a, b;
  double fa, fq1, fm, fq3, fb;
  double value;
  double error;
};

Panel make_panel(const std::function<double(double)>& f, double a, double b,
                 double fa, double fm, double fb) {
  const double h = b - a;
  const double fq1 = f(a + 0.25 * h);
  const double fq3 = f(a + 0.75 * h);
  const double s1 = h / 6.0 * (fa + 4.0 * fm + fb);
  const double s2 = h / 12.0 * (fa + 4.0 * fq1 + 2.0 * fm + 4.0 * fq3 + fb);
  const double diff = s2 - s1;
  return Panel{a, b, fa, fq1, fm, fq3, fb, s2 + diff / 15.0, std::abs(diff) / 15.0};
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

}  // namespace

Result adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, const Options& opt) {
  Result out;
  if (a == b) return out;
  const std::size_t n0 = std::max<std::size_t>(1, opt.initial_panels);
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  const double h = (b - a) / static_cast<double>(n0);
  double total_error = 0.0;
  double left = a;
  double f_left = f(a);
  for (std::size_t i = 0; i < n0; ++i) {
    const double right = (i + 1 == n0) ? b : a + static_cast<double>(i + 1) * h;
    const double mid = 0.5 * (left + right);
    const double f_right = f(right);
    Panel p = make_panel(f, left, right, f_left, f(mid), f_right);
    total_error += p.error;
    heap.push(p);
    left = right;
    f_left = f_right;
  }

  while (total_error > opt.abs_tol) {
    if (heap.size() >= opt.max_subdivisions) {
      throw QuadratureError("adaptive_simpson: tolerance " +
                            std::to_string(opt.abs_tol) + " unmet after " +
                            std::to_string(heap.size()) + " intervals");
    }
    Panel p = heap.top();
    heap.pop();
    if (!std::isfinite(p.value)) {
      throw QuadratureError("adaptive_simpson: non-finite integrand");
    }
    const double mid = 0.5 * (p.a + p.b);
    Panel l = make_panel(f, p.a, mid, p.fa, p.fq1, p.fm);
    Panel r = make_panel(f, mid, p.b, p.fm, p.fq3, p.fb);
    total_error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }

  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : panels) {
    out.value += p.value;
    out.error_estimate += p.error;
  }
  out.intervals = panels.size();
  if (!std::isfinite(out.value)) {
    throw QuadratureError("adaptive_simpson: non-finite integrand");
  }
  return out;
}

}  // namespace thermofid::quadrature
