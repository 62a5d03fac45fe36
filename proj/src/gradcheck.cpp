#include "sbaf/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sbaf/format.hpp"
#include "sbaf/random.hpp"

namespace sbafnet {

namespace {

constexpr double kRelGuard = 1e-8;

bool trace_near_kink(const ForwardTrace& trace, const ActivationSpec& spec, double h) {
  double kinks[2];
  int n_kinks = 0;
  switch (spec.kind) {
    case ActivationKind::Sbaf:
      kinks[n_kinks++] = spec.clamp_margin;
      kinks[n_kinks++] = 1.0 - spec.clamp_margin;
      break;
    case ActivationKind::Relu:
      kinks[n_kinks++] = 0.0;
      break;
    case ActivationKind::Sigmoid:
      break;
  }
  if (n_kinks == 0) return false;
  for (const Eigen::VectorXd& z : trace.net)
    for (Eigen::Index i = 0; i < z.size(); ++i)
      for (int k = 0; k < n_kinks; ++k)
        if (std::abs(z[i] - kinks[k]) <= h) return true;
  return false;
}

double guarded_rel_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), kRelGuard});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace

double fd_scalar(const std::function<double(double)>& f, double x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_scalar: h must be positive");
  const double fp = f(x + h);
  const double fm = f(x - h);
  if (!std::isfinite(fp) || !std::isfinite(fm))
    throw std::runtime_error("fd_scalar: non-finite evaluation");
  return (fp - fm) / (2.0 * h);
}

GradCheckReport check_network(const Network& net, const Eigen::VectorXd& input,
                              const Eigen::VectorXd& targets, double h, bool flip_sbaf_sign) {
  if (!(h > 0.0)) throw std::invalid_argument("check_network: h must be positive");

  const ForwardTrace base = forward(net, input);
  const Gradients analytic = backward(net, base, targets, flip_sbaf_sign);

  GradCheckReport report;
  report.h = h;
  Network work = net;

  // Evaluates the loss with *slot temporarily set to value; also reports whether
  // any net came within h of a kink during that pass.
  auto probe = [&](double& slot, double value) {
    const double saved = slot;
    slot = value;
    const ForwardTrace t = forward(work, input);
    const bool kink = trace_near_kink(t, work.activation, h);
    const double l = loss(t.outputs(), targets);
    slot = saved;
    return std::pair<double, bool>(l, kink);
  };

  auto add_record = [&](std::string param, double& slot, double analytic_value) {
    const double center = slot;
    const auto [lp, kink_p] = probe(slot, center + h);
    const auto [lm, kink_m] = probe(slot, center - h);
    GradCheckRecord rec;
    rec.param = std::move(param);
    rec.analytic = analytic_value;
    rec.numeric = (lp - lm) / (2.0 * h);
    rec.rel_error = guarded_rel_error(rec.analytic, rec.numeric);
    rec.straddles_kink = kink_p || kink_m;
    if (!rec.straddles_kink) report.max_rel_error = std::max(report.max_rel_error, rec.rel_error);
    report.records.push_back(std::move(rec));
  };

  for (int l = 0; l < net.num_weight_layers(); ++l) {
    const auto li = static_cast<std::size_t>(l);
    const std::string layer = std::to_string(l + 1);
    for (Eigen::Index r = 0; r < net.weights[li].rows(); ++r)
      for (Eigen::Index c = 0; c < net.weights[li].cols(); ++c)
        add_record("W" + layer + "[" + std::to_string(r) + "," + std::to_string(c) + "]",
                   work.weights[li](r, c), analytic.weights[li](r, c));
    for (Eigen::Index i = 0; i < net.biases[li].size(); ++i)
      add_record("b" + layer + "[" + std::to_string(i) + "]", work.biases[li][i],
                 analytic.biases[li][i]);
  }
  return report;
}

void write_tsv(std::ostream& out, const GradCheckReport& report) {
  out << "param\tanalytic\tnumeric\trel_error\n";
  for (const GradCheckRecord& rec : report.records)
    out << rec.param << '\t' << format_g(rec.analytic, 9) << '\t' << format_g(rec.numeric, 9)
        << '\t' << format_g(rec.rel_error, 3) << '\n';
}

namespace {

CheckInstance draw_instance(const std::vector<int>& layer_sizes,
                            const ActivationSpec& activation, std::uint64_t sub_seed) {
  CheckInstance inst;
  inst.net = init_network(layer_sizes, activation, sub_seed);

  std::mt19937_64 rng(sub_seed ^ 0x9e3779b97f4a7c15ull);  // decoupled from the init stream
  inst.input.resize(layer_sizes.front());
  for (Eigen::Index i = 0; i < inst.input.size(); ++i)
    inst.input[i] = uniform_range(rng, 0.05, 0.95);

  const ForwardTrace trace = forward(inst.net, inst.input);
  inst.targets.resize(layer_sizes.back());
  for (Eigen::Index i = 0; i < inst.targets.size(); ++i) {
    const double o = trace.outputs()[i];
    const double step = uniform_range(rng, 0.1, 0.35);
    inst.targets[i] = o >= 0.5 ? o - step : o + step;
  }
  return inst;
}

// A draw is usable when the h = 1e-6 central difference can actually resolve
// every gradient it will be compared against:
//  - every nonzero gradient is >= 5e-4, so the difference-quotient roundoff
//    (absolute, around 1e-10) stays below the 1e-6 relative bar. Exact zeros
//    are fine: they come from clamp saturation, where the quotient is exactly
//    zero too.
//  - no in-domain net sits within 0.05 of a clamp bound; the activation's
//    higher derivatives blow up like a fractional power there and inflate the
//    O(h^2) truncation term.
// Draws violating either are re-rolled.
bool well_conditioned(const CheckInstance& inst) {
  const ForwardTrace trace = forward(inst.net, inst.input);
  const ActivationSpec& spec = inst.net.activation;
  if (spec.kind == ActivationKind::Sbaf) {
    const double lo = spec.clamp_margin, hi = 1.0 - spec.clamp_margin;
    for (const Eigen::VectorXd& z : trace.net)
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (z[i] >= lo && z[i] <= hi && (z[i] - lo < 0.05 || hi - z[i] < 0.05)) return false;
  }

  const Gradients grads = backward(inst.net, trace, inst.targets);
  double min_nonzero = 1e300;
  double max_last_layer = 0.0;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    auto scan = [&](const double* data, Eigen::Index n) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = std::abs(data[i]);
        if (m != 0.0) min_nonzero = std::min(min_nonzero, m);
        if (l + 1 == grads.weights.size()) max_last_layer = std::max(max_last_layer, m);
      }
    };
    scan(grads.weights[l].data(), grads.weights[l].size());
    scan(grads.biases[l].data(), grads.biases[l].size());
  }
  return min_nonzero >= 5e-4 && max_last_layer >= 1e-3;
}

}  // namespace

CheckInstance make_check_instance(const std::vector<int>& layer_sizes,
                                  const ActivationSpec& activation, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
    CheckInstance inst =
        draw_instance(layer_sizes, activation, seed + 0x9e3779b97f4a7c15ull * attempt);
    if (well_conditioned(inst)) return inst;
  }
  throw std::runtime_error("make_check_instance: no well-conditioned draw found");
}

}  // namespace sbafnet
