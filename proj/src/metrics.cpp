#include "sbaf/metrics.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "sbaf/format.hpp"

namespace sbafnet {

int predict(const Network& net, const Eigen::VectorXd& features) {
  const ForwardTrace trace = forward(net, features);
  const Eigen::VectorXd& out = trace.outputs();
  int best = 0;
  for (Eigen::Index i = 1; i < out.size(); ++i)
    if (out[i] > out[best]) best = static_cast<int>(i);
  return best;
}

EvalReport evaluate(const Network& net, const Dataset& ds) {
  if (net.output_size() != ds.n_classes())
    throw std::invalid_argument("evaluate: network has " + std::to_string(net.output_size()) +
                                " outputs but the dataset has " + std::to_string(ds.n_classes()) +
                                " classes");
  if (net.input_size() != ds.n_features())
    throw std::invalid_argument("evaluate: network expects " + std::to_string(net.input_size()) +
                                " features, dataset has " + std::to_string(ds.n_features()));

  const int n = ds.n_classes();
  EvalReport report;
  report.confusion = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < ds.n_samples(); ++i) {
    const Eigen::VectorXd x = ds.features.row(i).transpose();
    const int truth = ds.labels[static_cast<std::size_t>(i)];
    const ForwardTrace trace = forward(net, x);
    const Eigen::VectorXd& out = trace.outputs();
    int pred = 0;
    for (Eigen::Index c = 1; c < out.size(); ++c)
      if (out[c] > out[pred]) pred = static_cast<int>(c);
    report.confusion(truth, pred) += 1;
    report.mean_loss += loss(out, one_hot_target(truth, n));
  }
  report.mean_loss /= ds.n_samples();
  report.accuracy =
      static_cast<double>(report.confusion.trace()) / static_cast<double>(ds.n_samples());

  report.precision.resize(static_cast<std::size_t>(n), 0.0);
  report.recall.resize(static_cast<std::size_t>(n), 0.0);
  for (int c = 0; c < n; ++c) {
    const int col_sum = report.confusion.col(c).sum();
    const int row_sum = report.confusion.row(c).sum();
    const int hit = report.confusion(c, c);
    report.precision[static_cast<std::size_t>(c)] = col_sum > 0 ? double(hit) / col_sum : 0.0;
    report.recall[static_cast<std::size_t>(c)] = row_sum > 0 ? double(hit) / row_sum : 0.0;
  }
  return report;
}

void write_text(std::ostream& out, const EvalReport& report,
                const std::vector<std::string>& class_names) {
  out << "accuracy:  " << format_g(report.accuracy, 6) << '\n';
  out << "mean loss: " << format_g(report.mean_loss, 6) << '\n';
  out << "confusion (rows: true, cols: predicted):\n";
  std::size_t width = 10;
  for (const std::string& name : class_names) width = std::max(width, name.size() + 2);
  out << std::setw(static_cast<int>(width)) << ' ';
  for (const std::string& name : class_names)
    out << std::setw(static_cast<int>(width)) << name;
  out << '\n';
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    out << std::setw(static_cast<int>(width)) << class_names[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c)
      out << std::setw(static_cast<int>(width)) << report.confusion(r, c);
    out << '\n';
  }
  out << "per class (precision / recall):\n";
  for (std::size_t c = 0; c < class_names.size(); ++c)
    out << "  " << class_names[c] << ": " << format_g(report.precision[c], 6) << " / "
        << format_g(report.recall[c], 6) << '\n';
}

void write_tsv(std::ostream& out, const EvalReport& report,
               const std::vector<std::string>& class_names) {
  out << "accuracy\t" << format_g17(report.accuracy) << '\n';
  out << "mean_loss\t" << format_g17(report.mean_loss) << '\n';
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    out << "confusion\t" << class_names[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c)
      out << '\t' << report.confusion(r, c);
    out << '\n';
  }
  for (std::size_t c = 0; c < class_names.size(); ++c)
    out << "class\t" << class_names[c] << '\t' << format_g17(report.precision[c]) << '\t'
        << format_g17(report.recall[c]) << '\n';
}

}  // namespace sbafnet
