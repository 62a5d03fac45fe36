// metrics.hpp: classification quality of a frozen network over a dataset.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sbaf/dataio.hpp"
#include "sbaf/network.hpp"

namespace sbafnet {

struct EvalReport {
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;  // rows: true class, cols: predicted class
  std::vector<double> precision;
  std::vector<double> recall;
  double mean_loss = 0.0;  // against the 0.99/0.01 one-hot targets
};

/// Argmax of the output activations; ties break toward the lowest class id.
int predict(const Network& net, const Eigen::VectorXd& features);

EvalReport evaluate(const Network& net, const Dataset& ds);

void write_text(std::ostream& out, const EvalReport& report,
                const std::vector<std::string>& class_names);
void write_tsv(std::ostream& out, const EvalReport& report,
               const std::vector<std::string>& class_names);

}  // namespace sbafnet
