// gradcheck.hpp: central finite differences as an independent oracle for the
// analytic derivatives and network gradients.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sbaf/network.hpp"

namespace sbafnet {

struct GradCheckRecord {
  std::string param;  // "W1[0,1]", "b2[0]", ... (layers 1-based)
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  // A net value came within h of a derivative kink (the SBAF clamp bounds, or 0
  // for ReLU) during the perturbed passes; the central difference is unreliable
  // there, so the record is listed but excluded from max_rel_error.
  bool straddles_kink = false;
};

struct GradCheckReport {
  std::vector<GradCheckRecord> records;
  double max_rel_error = 0.0;  // over non-straddling records
  double h = 0.0;
};

/// (f(x+h) - f(x-h)) / 2h. Throws if an evaluation is non-finite.
double fd_scalar(const std::function<double(double)>& f, double x, double h);

/// Perturbs every weight and bias by +-h, recomputes the loss, and compares the
/// central difference against backward()'s analytic gradient. Relative errors
/// use the denominator max(|analytic|, |numeric|, 1e-8).
GradCheckReport check_network(const Network& net, const Eigen::VectorXd& input,
                              const Eigen::VectorXd& targets, double h = 1e-6,
                              bool flip_sbaf_sign = false);

/// Columns: param, analytic, numeric, rel_error.
void write_tsv(std::ostream& out, const GradCheckReport& report);

/// A deterministic network/input/target triple for gradient checking. Targets
/// are offset 0.1..0.35 from the initial outputs, toward the middle of the
/// range, so every output error term is well away from zero.
struct CheckInstance {
  Network net;
  Eigen::VectorXd input;
  Eigen::VectorXd targets;
};

CheckInstance make_check_instance(const std::vector<int>& layer_sizes,
                                  const ActivationSpec& activation, std::uint64_t seed);

}  // namespace sbafnet
