// activation.hpp: the SBAF activation y = 1/(1 + k*x^a*(1-x)^(1-a)), its first and
// second derivatives, and the sigmoid/ReLU baselines.
#pragma once

#include <string_view>

#include <Eigen/Core>

namespace sbafnet {

enum class ActivationKind { Sbaf, Sigmoid, Relu };

const char* to_string(ActivationKind kind);
ActivationKind parse_activation_kind(std::string_view name);

/// Activation choice plus the SBAF parameters. The baselines ignore k, alpha and
/// clamp_margin but the values are stored (and validated) either way.
struct ActivationSpec {
  ActivationKind kind = ActivationKind::Sbaf;
  double k = 1.0;              // kernel scale, >= 0
  double alpha = 0.5;          // kernel exponent, in [0, 1]
  double clamp_margin = 1e-6;  // eps of the domain guard, in (0, 0.5)

  ActivationSpec() = default;
  ActivationSpec(ActivationKind kind, double k, double alpha, double clamp_margin);
};

ActivationSpec sbaf_spec(double k = 1.0, double alpha = 0.5, double clamp_margin = 1e-6);
ActivationSpec sigmoid_spec();
ActivationSpec relu_spec();

/// Pulls x into [eps, 1-eps] so fractional powers stay real-valued. Identity on
/// the interior. SBAF specs only; throws std::domain_error for non-finite x.
double clamp_domain(double x, const ActivationSpec& spec);

/// Kernel term g = k * u^alpha * (1-u)^(1-alpha) at u = clamp_domain(x).
/// Satisfies g = (1-y)/y against the matching sbaf value.
double sbaf_kernel(double x, const ActivationSpec& spec);

/// y = 1/(1 + g) at the clamped input; in (0,1) for k > 0, identically 1 for k = 0.
double sbaf(double x, const ActivationSpec& spec);

/// dy/dx = y(1-y)(x-alpha) / (x(1-x)) evaluated at the clamped input, and 0
/// outside [eps, 1-eps] where the clamp flattens the function. Note the (x-alpha)
/// numerator: the kernel peaks at x = alpha, so y has its minimum there and the
/// derivative is negative left of alpha and positive right of it. This sign is
/// what central finite differences confirm (see the gradcheck module).
double sbaf_derivative(double x, const ActivationSpec& spec);

/// Exact second derivative of the clamped function; 0 outside [eps, 1-eps].
/// At x = alpha it reduces to y(1-y)/(alpha(1-alpha)) > 0, an interior minimum.
double sbaf_second_derivative(double x, const ActivationSpec& spec);

/// Sigmoid or ReLU per spec.kind; rejects SBAF specs.
double baseline_activation(double x, const ActivationSpec& spec);
double baseline_derivative(double x, const ActivationSpec& spec);

/// Dispatch on spec.kind.
double activate(double x, const ActivationSpec& spec);
double activate_derivative(double x, const ActivationSpec& spec);

Eigen::VectorXd activate(const Eigen::VectorXd& x, const ActivationSpec& spec);
Eigen::VectorXd activate_derivative(const Eigen::VectorXd& x, const ActivationSpec& spec);

}  // namespace sbafnet
