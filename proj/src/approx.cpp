#include "sbaf/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbafnet {

PiecewiseKernel build_kernel(const ActivationSpec& spec, int n_segments) {
  if (spec.kind != ActivationKind::Sbaf)
    throw std::invalid_argument("build_kernel: spec is not SBAF");
  if (n_segments < 1) throw std::invalid_argument("build_kernel: n_segments must be >= 1");

  const double lo = spec.clamp_margin;
  const double hi = 1.0 - spec.clamp_margin;

  PiecewiseKernel pk;
  pk.spec = spec;
  pk.n_segments = n_segments;
  pk.segments.reserve(static_cast<std::size_t>(n_segments));

  double prev_x = lo;
  double prev_g = sbaf_kernel(lo, spec);
  for (int i = 1; i <= n_segments; ++i) {
    const double x = (i == n_segments) ? hi : lo + (hi - lo) * (static_cast<double>(i) / n_segments);
    const double g = sbaf_kernel(x, spec);
    KernelSegment seg;
    seg.x_start = prev_x;
    seg.x_end = x;
    seg.slope = (g - prev_g) / (x - prev_x);
    seg.intercept = prev_g - seg.slope * prev_x;
    pk.segments.push_back(seg);
    prev_x = x;
    prev_g = g;
  }
  return pk;
}

double eval_kernel_approx(const PiecewiseKernel& pk, double x) {
  if (!std::isfinite(x)) throw std::domain_error("eval_kernel_approx: non-finite input");
  const double lo = pk.x_lo();
  const double hi = pk.x_hi();
  const double xc = std::min(std::max(x, lo), hi);

  int idx = static_cast<int>((xc - lo) / (hi - lo) * pk.n_segments);
  idx = std::clamp(idx, 0, pk.n_segments - 1);
  // Rounding in the index arithmetic can land one segment off right at a breakpoint.
  if (xc < pk.segments[static_cast<std::size_t>(idx)].x_start && idx > 0) --idx;
  if (xc > pk.segments[static_cast<std::size_t>(idx)].x_end && idx + 1 < pk.n_segments) ++idx;

  const KernelSegment& seg = pk.segments[static_cast<std::size_t>(idx)];
  return seg.slope * xc + seg.intercept;
}

double eval_approx(const PiecewiseKernel& pk, double x) {
  return 1.0 / (1.0 + eval_kernel_approx(pk, x));
}

ApproxError measure_error(const PiecewiseKernel& pk, int n_grid) {
  if (n_grid < 2) throw std::invalid_argument("measure_error: n_grid must be >= 2");
  const double lo = pk.x_lo();
  const double hi = pk.x_hi();

  ApproxError err;
  for (int i = 0; i < n_grid; ++i) {
    const double x =
        (i == n_grid - 1) ? hi : lo + (hi - lo) * (static_cast<double>(i) / (n_grid - 1));
    const double g_approx = eval_kernel_approx(pk, x);
    const double g_exact = sbaf_kernel(x, pk.spec);
    const double y_approx = 1.0 / (1.0 + g_approx);
    const double y_exact = 1.0 / (1.0 + g_exact);
    err.max_abs_error_g = std::max(err.max_abs_error_g, std::abs(g_approx - g_exact));
    err.max_abs_error_y = std::max(err.max_abs_error_y, std::abs(y_approx - y_exact));
  }
  return err;
}

}  // namespace sbafnet
