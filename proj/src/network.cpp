#include "sbaf/network.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sbaf/format.hpp"
#include "sbaf/random.hpp"

namespace sbafnet {

Network init_network(const std::vector<int>& layer_sizes, const ActivationSpec& activation,
                     std::uint64_t seed) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("init_network: need at least an input and an output layer");
  for (int s : layer_sizes)
    if (s < 1) throw std::invalid_argument("init_network: layer sizes must be positive");

  Network net;
  net.layer_sizes = layer_sizes;
  net.activation = activation;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    Eigen::MatrixXd w(layer_sizes[l + 1], layer_sizes[l]);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = uniform_range(rng, -0.5, 0.5);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Constant(layer_sizes[l + 1], 0.5));
  }
  return net;
}

ForwardTrace forward(const Network& net, const Eigen::VectorXd& input) {
  if (input.size() != net.input_size())
    throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                " does not match input layer width " +
                                std::to_string(net.input_size()));
  const ActivationSpec& spec = net.activation;
  ForwardTrace trace;
  trace.input = input;
  const auto layers = static_cast<std::size_t>(net.num_weight_layers());
  trace.net.reserve(layers);
  trace.net_clamped.reserve(layers);
  trace.out.reserve(layers);  // keeps the `below` pointer stable across push_backs
  const Eigen::VectorXd* below = &trace.input;
  for (int l = 0; l < net.num_weight_layers(); ++l) {
    Eigen::VectorXd z = net.weights[static_cast<std::size_t>(l)] * (*below) +
                        net.biases[static_cast<std::size_t>(l)];
    Eigen::VectorXd zc =
        spec.kind == ActivationKind::Sbaf
            ? Eigen::VectorXd(z.unaryExpr([&spec](double v) { return clamp_domain(v, spec); }))
            : z;
    trace.out.push_back(activate(z, spec));
    trace.net.push_back(std::move(z));
    trace.net_clamped.push_back(std::move(zc));
    below = &trace.out.back();
  }
  return trace;
}

double loss(const Eigen::VectorXd& outputs, const Eigen::VectorXd& targets) {
  if (outputs.size() != targets.size())
    throw std::invalid_argument("loss: output/target length mismatch");
  return 0.5 * (targets - outputs).squaredNorm();
}

Gradients backward(const Network& net, const ForwardTrace& trace, const Eigen::VectorXd& targets,
                   bool flip_sbaf_sign) {
  const int layers = net.num_weight_layers();
  if (static_cast<int>(trace.net.size()) != layers || trace.input.size() != net.input_size())
    throw std::invalid_argument("backward: trace does not match network shape");
  for (int l = 0; l < layers; ++l)
    if (trace.net[static_cast<std::size_t>(l)].size() != net.layer_sizes[static_cast<std::size_t>(l) + 1] ||
        trace.out[static_cast<std::size_t>(l)].size() != net.layer_sizes[static_cast<std::size_t>(l) + 1])
      throw std::invalid_argument("backward: trace does not match network shape");
  if (targets.size() != net.output_size())
    throw std::invalid_argument("backward: target length mismatch");

  const double sign =
      (flip_sbaf_sign && net.activation.kind == ActivationKind::Sbaf) ? -1.0 : 1.0;

  Gradients grads;
  grads.weights.resize(static_cast<std::size_t>(layers));
  grads.biases.resize(static_cast<std::size_t>(layers));

  Eigen::VectorXd delta;
  for (int l = layers - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const Eigen::VectorXd dact =
        sign * activate_derivative(trace.net[li], net.activation);
    if (l == layers - 1) {
      delta = (trace.out[li] - targets).cwiseProduct(dact);  // = -(t - o) * f'
    } else {
      const Eigen::VectorXd back = net.weights[li + 1].transpose() * delta;
      delta = back.cwiseProduct(dact);
    }
    const Eigen::VectorXd& below = (l == 0) ? trace.input : trace.out[li - 1];
    grads.weights[li] = delta * below.transpose();
    grads.biases[li] = delta;
  }
  return grads;
}

void sgd_step(Network& net, const Gradients& grads, double learning_rate) {
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("sgd_step: learning rate must be positive");
  if (grads.weights.size() != net.weights.size() || grads.biases.size() != net.biases.size())
    throw std::invalid_argument("sgd_step: gradient shapes do not match network");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (grads.weights[l].rows() != net.weights[l].rows() ||
        grads.weights[l].cols() != net.weights[l].cols() ||
        grads.biases[l].size() != net.biases[l].size())
      throw std::invalid_argument("sgd_step: gradient shapes do not match network");
    if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite())
      throw std::runtime_error("sgd_step: non-finite gradient");
  }
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    net.weights[l] -= learning_rate * grads.weights[l];
    net.biases[l] -= learning_rate * grads.biases[l];
    if (!net.weights[l].allFinite() || !net.biases[l].allFinite())
      throw std::runtime_error("sgd_step: parameters became non-finite");
  }
}

Eigen::VectorXd one_hot_target(int label, int n_classes) {
  if (label < 0 || label >= n_classes)
    throw std::invalid_argument("one_hot_target: label " + std::to_string(label) +
                                " not encodable with " + std::to_string(n_classes) + " outputs");
  Eigen::VectorXd t = Eigen::VectorXd::Constant(n_classes, 0.01);
  t[label] = 0.99;
  return t;
}

std::vector<double> train(Network& net, const Dataset& data, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0))
    throw std::invalid_argument("train: learning rate must be positive");
  if (data.n_samples() == 0) throw std::invalid_argument("train: empty dataset");
  if (data.n_features() != net.input_size())
    throw std::invalid_argument("train: dataset has " + std::to_string(data.n_features()) +
                                " features but the network expects " +
                                std::to_string(net.input_size()));
  if (data.n_classes() > net.output_size())
    throw std::invalid_argument("train: " + std::to_string(data.n_classes()) +
                                " classes are not one-hot encodable to " +
                                std::to_string(net.output_size()) + " outputs");

  std::mt19937_64 rng(cfg.seed);
  std::vector<int> order(static_cast<std::size_t>(data.n_samples()));
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle_indices(order, rng);
    double loss_sum = 0.0;
    for (int idx : order) {
      const Eigen::VectorXd x = data.features.row(idx).transpose();
      const Eigen::VectorXd target =
          one_hot_target(data.labels[static_cast<std::size_t>(idx)], net.output_size());
      const ForwardTrace trace = forward(net, x);
      const double sample_loss = loss(trace.outputs(), target);
      if (!std::isfinite(sample_loss))
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", sample " + std::to_string(idx));
      loss_sum += sample_loss;
      sgd_step(net, backward(net, trace, target), cfg.learning_rate);
    }
    history.push_back(loss_sum / data.n_samples());
  }
  return history;
}

// ---- model file ----

void save_network(std::ostream& out, const Network& net) {
  out << "SBAFNET 1\n";
  out << "layers:";
  for (int s : net.layer_sizes) out << ' ' << s;
  out << '\n';
  out << "activation: " << to_string(net.activation.kind) << ' ' << format_g17(net.activation.k)
      << ' ' << format_g17(net.activation.alpha) << ' ' << format_g17(net.activation.clamp_margin)
      << '\n';
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const Eigen::MatrixXd& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << format_g17(w(r, c));
      out << '\n';
    }
    const Eigen::VectorXd& b = net.biases[l];
    for (Eigen::Index i = 0; i < b.size(); ++i) out << (i ? " " : "") << format_g17(b[i]);
    out << '\n';
  }
}

void save_network(const std::string& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_network: cannot open '" + path + "' for writing");
  save_network(out, net);
  if (!out) throw std::runtime_error("save_network: write to '" + path + "' failed");
}

namespace {

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(std::string("load_network: unexpected end of file, expected ") +
                             what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<double> parse_numbers(const std::string& line, std::size_t expected,
                                  const char* what) {
  std::istringstream ss(line);
  std::vector<double> values;
  double v = 0.0;
  while (ss >> v) values.push_back(v);
  if (values.size() != expected)
    throw std::runtime_error("load_network: expected " + std::to_string(expected) + " values on " +
                             what + " line, found " + std::to_string(values.size()));
  return values;
}

}  // namespace

Network load_network(std::istream& in) {
  if (next_line(in, "the version header") != "SBAFNET 1")
    throw std::runtime_error("load_network: missing or unsupported 'SBAFNET 1' header");

  std::istringstream layers_line(next_line(in, "the layers line"));
  std::string tag;
  layers_line >> tag;
  if (tag != "layers:") throw std::runtime_error("load_network: expected 'layers:' line");
  std::vector<int> sizes;
  for (int s = 0; layers_line >> s;) sizes.push_back(s);
  if (sizes.size() < 2) throw std::runtime_error("load_network: need at least 2 layer sizes");
  for (int s : sizes)
    if (s < 1) throw std::runtime_error("load_network: layer sizes must be positive");

  std::istringstream act_line(next_line(in, "the activation line"));
  std::string kind_name;
  double k = 0.0, alpha = 0.0, eps = 0.0;
  act_line >> tag >> kind_name >> k >> alpha >> eps;
  if (tag != "activation:" || !act_line)
    throw std::runtime_error("load_network: malformed activation line");

  Network net;
  net.layer_sizes = sizes;
  net.activation = ActivationSpec(parse_activation_kind(kind_name), k, alpha, eps);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      const auto row = parse_numbers(next_line(in, "a weight row"),
                                     static_cast<std::size_t>(w.cols()), "a weight row");
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = row[static_cast<std::size_t>(c)];
    }
    const auto bias = parse_numbers(next_line(in, "a bias vector"),
                                    static_cast<std::size_t>(sizes[l + 1]), "a bias vector");
    Eigen::VectorXd b(sizes[l + 1]);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = bias[static_cast<std::size_t>(i)];
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_network: cannot open '" + path + "'");
  return load_network(in);
}

}  // namespace sbafnet
