// network.hpp: dense feed-forward network with per-sample backpropagation and
// online SGD, plus the line-oriented model file format.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sbaf/activation.hpp"
#include "sbaf/dataio.hpp"

namespace sbafnet {

struct Network {
  std::vector<int> layer_sizes;           // [n_in, ..., n_out]
  std::vector<Eigen::MatrixXd> weights;   // weights[l]: layer_sizes[l+1] x layer_sizes[l]
  std::vector<Eigen::VectorXd> biases;    // biases[l]: layer_sizes[l+1], one bias per neuron
  ActivationSpec activation;              // applied to every non-input layer

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  int num_weight_layers() const { return static_cast<int>(weights.size()); }
};

/// Everything the backward pass needs, retained per non-input layer.
struct ForwardTrace {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> net;          // raw pre-activations
  std::vector<Eigen::VectorXd> net_clamped;  // after the SBAF domain guard (== net for baselines)
  std::vector<Eigen::VectorXd> out;          // activations

  const Eigen::VectorXd& outputs() const { return out.back(); }
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 1;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

/// Weights i.i.d. uniform on [-0.5, 0.5] (row-major draw order, layer by layer),
/// biases 0.5; deterministic given the seed. With normalized inputs this puts
/// initial nets near the live region of the SBAF domain.
Network init_network(const std::vector<int>& layer_sizes, const ActivationSpec& activation,
                     std::uint64_t seed);

/// net[l] = W[l]*out[l-1] + b[l]; out[l] = activation(clamp(net[l])).
ForwardTrace forward(const Network& net, const Eigen::VectorXd& input);

/// Sum of squared errors with the 1/2 convention: sum_i 0.5*(t_i - o_i)^2.
double loss(const Eigen::VectorXd& outputs, const Eigen::VectorXd& targets);

/// Exact gradients of `loss` w.r.t. every weight and bias. Output deltas are
/// -(t-o)*f'(net); hidden deltas accumulate downstream deltas through the
/// weights. f' is the activation derivative at the raw net (0 where the SBAF
/// clamp saturates). `flip_sbaf_sign` negates the SBAF derivative factor, a
/// diagnostic mode for demonstrating the wrong-sign variant of dy/dx.
Gradients backward(const Network& net, const ForwardTrace& trace, const Eigen::VectorXd& targets,
                   bool flip_sbaf_sign = false);

/// In-place p <- p - lr * dL/dp; rejects non-finite gradients.
void sgd_step(Network& net, const Gradients& grads, double learning_rate);

/// One-hot with 0.99/0.01 in place of 1/0, since SBAF outputs are bounded away
/// from 0.
Eigen::VectorXd one_hot_target(int label, int n_classes);

/// Online SGD: per epoch, iterate samples (shuffled by seed when enabled) and
/// apply forward -> backward -> sgd_step per sample. Returns the per-epoch mean
/// of the per-sample losses, recorded before each update. Deterministic.
std::vector<double> train(Network& net, const Dataset& data, const TrainConfig& cfg);

// Model file: version line "SBAFNET 1", then "layers: ...", "activation: kind k
// alpha eps", then per layer each weight-matrix row and the bias vector, one
// line each, 17 significant digits (round-trip exact).
void save_network(std::ostream& out, const Network& net);
void save_network(const std::string& path, const Network& net);
Network load_network(std::istream& in);
Network load_network(const std::string& path);

}  // namespace sbafnet
