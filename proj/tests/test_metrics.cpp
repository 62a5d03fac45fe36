#include "sbaf/metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

using namespace sbafnet;

namespace {

// 1-input, 2-output net with zero weights: outputs depend only on the biases.
Network bias_only_net(double bias0, double bias1, const ActivationSpec& spec) {
  Network net;
  net.layer_sizes = {1, 2};
  net.activation = spec;
  net.weights = {Eigen::MatrixXd::Zero(2, 1)};
  Eigen::VectorXd b(2);
  b << bias0, bias1;
  net.biases = {b};
  return net;
}

Dataset labeled_dataset(const std::vector<int>& labels, int n_classes) {
  Dataset ds;
  ds.features = Eigen::MatrixXd::Constant(static_cast<int>(labels.size()), 1, 0.5);
  ds.labels = labels;
  for (int c = 0; c < n_classes; ++c) ds.class_names.push_back(std::string(1, char('a' + c)));
  ds.normalization = {{0.01, 0.99}};
  return ds;
}

}  // namespace

TEST_CASE("a class-0-favoring network on an all-class-0 dataset is perfect") {
  // bias 0.2 gives a larger SBAF output than bias 0.5 (the minimum sits at 0.5)
  const Network net = bias_only_net(0.2, 0.5, sbaf_spec());
  const Dataset ds = labeled_dataset({0, 0, 0, 0}, 2);
  const EvalReport report = evaluate(net, ds);
  CHECK(report.accuracy == 1.0);
  CHECK(report.confusion(0, 0) == 4);
  CHECK(report.confusion.sum() == 4);
  CHECK(report.precision[0] == 1.0);
  CHECK(report.recall[0] == 1.0);
}

TEST_CASE("k = 0 ties every output and the tie breaks toward class 0") {
  const Network net = bias_only_net(0.7, 0.7, sbaf_spec(0.0));
  const Dataset ds = labeled_dataset({0, 0, 1}, 2);
  const EvalReport report = evaluate(net, ds);
  CHECK(report.confusion(0, 0) == 2);
  CHECK(report.confusion(1, 0) == 1);
  CHECK(report.confusion(0, 1) == 0);
  CHECK(report.confusion(1, 1) == 0);
  CHECK(report.accuracy == doctest::Approx(2.0 / 3.0));
  // precision/recall arithmetic on this confusion
  CHECK(report.precision[0] == doctest::Approx(2.0 / 3.0));
  CHECK(report.recall[0] == 1.0);
  CHECK(report.precision[1] == 0.0);  // empty predicted column
  CHECK(report.recall[1] == 0.0);
}

TEST_CASE("predict matches the argmax of forward outputs") {
  const Network net = init_network({2, 3, 3}, sbaf_spec(), 6);
  for (double x : {0.1, 0.4, 0.9}) {
    const Eigen::Vector2d in(x, 1.0 - x);
    const Eigen::VectorXd out = forward(net, in).outputs();
    int best = 0;
    for (int c = 1; c < 3; ++c)
      if (out[c] > out[best]) best = c;
    CHECK(predict(net, in) == best);
  }
}

TEST_CASE("permuting dataset rows leaves accuracy and confusion unchanged") {
  const Dataset ds = synthesize(SyntheticKind::Blobs2, 60, 12);
  const Network net = init_network({2, 3, 2}, sbaf_spec(), 2);
  const EvalReport before = evaluate(net, ds);

  Dataset reversed = ds;
  for (int i = 0; i < ds.n_samples(); ++i) {
    reversed.features.row(i) = ds.features.row(ds.n_samples() - 1 - i);
    reversed.labels[i] = ds.labels[ds.n_samples() - 1 - i];
  }
  const EvalReport after = evaluate(net, reversed);
  CHECK(before.accuracy == after.accuracy);
  CHECK(before.confusion == after.confusion);
  CHECK(before.mean_loss == doctest::Approx(after.mean_loss).epsilon(1e-15));
}

TEST_CASE("evaluate validates widths") {
  const Network net = init_network({2, 3, 3}, sbaf_spec(), 2);
  const Dataset two_classes = synthesize(SyntheticKind::Blobs2, 10, 1);
  CHECK_THROWS_AS(evaluate(net, two_classes), std::invalid_argument);
  const Network narrow = init_network({3, 2}, sbaf_spec(), 2);
  CHECK_THROWS_AS(evaluate(narrow, two_classes), std::invalid_argument);
}

TEST_CASE("mean_loss matches a manual computation") {
  const Network net = bias_only_net(0.2, 0.5, sbaf_spec());
  const Dataset ds = labeled_dataset({0, 1}, 2);
  const EvalReport report = evaluate(net, ds);
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd out = forward(net, ds.features.row(i).transpose()).outputs();
    expected += loss(out, one_hot_target(ds.labels[i], 2));
  }
  expected /= 2.0;
  CHECK(report.mean_loss == doctest::Approx(expected).epsilon(1e-15));
  CHECK(report.mean_loss >= 0.0);
}

TEST_CASE("report writers emit both formats") {
  const Dataset ds = synthesize(SyntheticKind::Blobs2, 20, 3);
  const Network net = init_network({2, 3, 2}, sbaf_spec(), 2);
  const EvalReport report = evaluate(net, ds);

  std::stringstream text;
  write_text(text, report, ds.class_names);
  CHECK(text.str().find("accuracy") != std::string::npos);
  CHECK(text.str().find("confusion") != std::string::npos);

  std::stringstream tsv;
  write_tsv(tsv, report, ds.class_names);
  std::string first;
  std::getline(tsv, first);
  CHECK(first.rfind("accuracy\t", 0) == 0);
}
