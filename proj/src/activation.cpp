#include "sbaf/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sbafnet {

const char* to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Sbaf: return "sbaf";
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::Relu: return "relu";
  }
  return "unknown";
}

ActivationKind parse_activation_kind(std::string_view name) {
  if (name == "sbaf") return ActivationKind::Sbaf;
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "relu") return ActivationKind::Relu;
  throw std::invalid_argument("unknown activation kind '" + std::string(name) +
                              "' (expected sbaf, sigmoid or relu)");
}

ActivationSpec::ActivationSpec(ActivationKind kind_, double k_, double alpha_, double clamp_margin_)
    : kind(kind_), k(k_), alpha(alpha_), clamp_margin(clamp_margin_) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw std::invalid_argument("ActivationSpec: k must be a finite value >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("ActivationSpec: alpha must lie in [0, 1]");
  if (!(clamp_margin > 0.0 && clamp_margin < 0.5))
    throw std::invalid_argument("ActivationSpec: clamp_margin must lie in (0, 0.5)");
}

ActivationSpec sbaf_spec(double k, double alpha, double clamp_margin) {
  return ActivationSpec(ActivationKind::Sbaf, k, alpha, clamp_margin);
}

ActivationSpec sigmoid_spec() { return ActivationSpec(ActivationKind::Sigmoid, 1.0, 0.5, 1e-6); }

ActivationSpec relu_spec() { return ActivationSpec(ActivationKind::Relu, 1.0, 0.5, 1e-6); }

double clamp_domain(double x, const ActivationSpec& spec) {
  if (spec.kind != ActivationKind::Sbaf)
    throw std::invalid_argument("clamp_domain: spec is not SBAF");
  if (!std::isfinite(x)) throw std::domain_error("clamp_domain: non-finite input");
  const double eps = spec.clamp_margin;
  return std::min(std::max(x, eps), 1.0 - eps);
}

double sbaf_kernel(double x, const ActivationSpec& spec) {
  const double u = clamp_domain(x, spec);
  return spec.k * std::pow(u, spec.alpha) * std::pow(1.0 - u, 1.0 - spec.alpha);
}

double sbaf(double x, const ActivationSpec& spec) {
  return 1.0 / (1.0 + sbaf_kernel(x, spec));
}

double sbaf_derivative(double x, const ActivationSpec& spec) {
  const double u = clamp_domain(x, spec);
  if (x != u) return 0.0;  // saturated: the clamped function is flat out there
  const double y = sbaf(u, spec);
  return y * (1.0 - y) * (u - spec.alpha) / (u * (1.0 - u));
}

double sbaf_second_derivative(double x, const ActivationSpec& spec) {
  const double u = clamp_domain(x, spec);
  if (x != u) return 0.0;
  const double y = sbaf(u, spec);
  const double p = u - spec.alpha;
  const double q = u * (1.0 - u);
  return y * (1.0 - y) * ((1.0 - 2.0 * y) * p * p + q - p * (1.0 - 2.0 * u)) / (q * q);
}

double baseline_activation(double x, const ActivationSpec& spec) {
  switch (spec.kind) {
    case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
    default: throw std::invalid_argument("baseline_activation: spec is SBAF, not a baseline");
  }
}

double baseline_derivative(double x, const ActivationSpec& spec) {
  switch (spec.kind) {
    case ActivationKind::Sigmoid: {
      const double y = 1.0 / (1.0 + std::exp(-x));
      return y * (1.0 - y);
    }
    case ActivationKind::Relu: return x > 0.0 ? 1.0 : 0.0;
    default: throw std::invalid_argument("baseline_derivative: spec is SBAF, not a baseline");
  }
}

double activate(double x, const ActivationSpec& spec) {
  return spec.kind == ActivationKind::Sbaf ? sbaf(x, spec) : baseline_activation(x, spec);
}

double activate_derivative(double x, const ActivationSpec& spec) {
  return spec.kind == ActivationKind::Sbaf ? sbaf_derivative(x, spec)
                                           : baseline_derivative(x, spec);
}

Eigen::VectorXd activate(const Eigen::VectorXd& x, const ActivationSpec& spec) {
  return x.unaryExpr([&spec](double v) { return activate(v, spec); });
}

Eigen::VectorXd activate_derivative(const Eigen::VectorXd& x, const ActivationSpec& spec) {
  return x.unaryExpr([&spec](double v) { return activate_derivative(v, spec); });
}

}  // namespace sbafnet
