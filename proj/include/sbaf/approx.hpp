// approx.hpp: piecewise-linear chord approximation of the SBAF kernel term, so the
// activation can be evaluated without fractional powers.
#pragma once

#include <vector>

#include "sbaf/activation.hpp"

namespace sbafnet {

/// One linear piece: ghat(x) = slope * x + intercept on [x_start, x_end].
struct KernelSegment {
  double x_start = 0.0;
  double x_end = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Chord interpolant of the kernel g(x) = k*x^alpha*(1-x)^(1-alpha) on uniform
/// breakpoints over [eps, 1-eps]. The kernel is concave there, so chords sit at
/// or below g and the induced yhat = 1/(1+ghat) stays in (0, 1]; refining the
/// breakpoints can only move the chords up toward g.
struct PiecewiseKernel {
  ActivationSpec spec;
  int n_segments = 0;
  std::vector<KernelSegment> segments;

  double x_lo() const { return segments.front().x_start; }
  double x_hi() const { return segments.back().x_end; }
};

/// Build the chord interpolant; n_segments = 1 is the single straight-line mode.
PiecewiseKernel build_kernel(const ActivationSpec& spec, int n_segments);

/// ghat(x) with x clamped into [eps, 1-eps]; segment located in O(1).
double eval_kernel_approx(const PiecewiseKernel& pk, double x);

/// yhat(x) = 1/(1 + ghat(x)).
double eval_approx(const PiecewiseKernel& pk, double x);

struct ApproxError {
  double max_abs_error_y = 0.0;
  double max_abs_error_g = 0.0;
};

/// Max |yhat-y| and |ghat-g| over a uniform n_grid-point grid of [eps, 1-eps].
ApproxError measure_error(const PiecewiseKernel& pk, int n_grid);

}  // namespace sbafnet
