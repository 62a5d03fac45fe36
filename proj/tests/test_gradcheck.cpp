#include "sbaf/gradcheck.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

using namespace sbafnet;

TEST_CASE("fd_scalar on polynomials up to degree 2 is essentially exact") {
  auto identity = [](double x) { return x; };
  CHECK(fd_scalar(identity, 3.7, 1e-6) == doctest::Approx(1.0).epsilon(1e-10));
  auto square = [](double x) { return x * x; };
  CHECK(fd_scalar(square, 3.0, 1e-6) == doctest::Approx(6.0).epsilon(1e-9));
  auto quad = [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; };
  for (double x : {-2.0, 0.0, 0.5, 10.0})
    CHECK(fd_scalar(quad, x, 1e-4) ==
          doctest::Approx(6.0 * x - 2.0).epsilon(1e-10));
}

TEST_CASE("fd_scalar matches the analytic SBAF derivative") {
  const ActivationSpec spec = sbaf_spec();
  auto f = [&spec](double x) { return sbaf(x, spec); };
  CHECK(fd_scalar(f, 0.4, 1e-6) == doctest::Approx(-0.091956267464672905).epsilon(1e-6));
}

TEST_CASE("fd_scalar argument and evaluation errors") {
  auto identity = [](double x) { return x; };
  CHECK_THROWS_AS(fd_scalar(identity, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fd_scalar(identity, 1.0, -1e-6), std::invalid_argument);
  auto blows_up = [](double) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(fd_scalar(blows_up, 1.0, 1e-6), std::runtime_error);
}

TEST_CASE("check_network with targets equal to outputs") {
  const Network net = init_network({2, 2, 2}, sbaf_spec(), 4);
  const Eigen::Vector2d input(0.3, 0.7);
  const ForwardTrace trace = forward(net, input);
  const GradCheckReport report = check_network(net, input, trace.outputs());
  for (const GradCheckRecord& rec : report.records) {
    CHECK(rec.analytic == 0.0);
    CHECK(std::abs(rec.numeric) <= 1e-10);  // only the O(h^2) truncation term remains
  }
  CHECK(report.max_rel_error <= 1e-4);
}

TEST_CASE("check_network passes on random SBAF networks") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const CheckInstance inst = make_check_instance({3, 5, 2}, sbaf_spec(), seed);
    const GradCheckReport report = check_network(inst.net, inst.input, inst.targets);
    CHECK(report.max_rel_error <= 1e-6);
    CHECK(report.h == 1e-6);
    CHECK(report.records.size() == 3 * 5 + 5 + 5 * 2 + 2);
  }
}

TEST_CASE("check_network calibrates on sigmoid networks") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const CheckInstance inst = make_check_instance({3, 5, 2}, sigmoid_spec(), seed);
    const GradCheckReport report = check_network(inst.net, inst.input, inst.targets);
    CHECK(report.max_rel_error <= 1e-6);
  }
}

TEST_CASE("the sign-flipped derivative is loudly wrong") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const CheckInstance inst = make_check_instance({2, 2, 2}, sbaf_spec(), seed);
    const GradCheckReport report =
        check_network(inst.net, inst.input, inst.targets, 1e-6, /*flip_sbaf_sign=*/true);
    CHECK(report.max_rel_error >= 1.0);
  }
}

TEST_CASE("records near the clamp boundary are flagged and excluded") {
  // weights 0, bias exactly at the clamp margin: every net sits on the kink
  Network net = init_network({1, 1}, sbaf_spec(1.0, 0.5, 0.01), 1);
  net.weights[0].setZero();
  net.biases[0].setConstant(0.01);
  Eigen::VectorXd input(1);
  input << 0.5;
  const GradCheckReport report = check_network(net, input, Eigen::VectorXd::Constant(1, 0.7));
  REQUIRE(report.records.size() == 2);
  for (const GradCheckRecord& rec : report.records) CHECK(rec.straddles_kink);
  CHECK(report.max_rel_error == 0.0);  // nothing left to take the max over
}

TEST_CASE("ReLU nets at the kink are flagged too") {
  Network net = init_network({1, 1}, relu_spec(), 1);
  net.weights[0].setZero();
  net.biases[0].setZero();
  Eigen::VectorXd input(1);
  input << 0.5;
  const GradCheckReport report = check_network(net, input, Eigen::VectorXd::Constant(1, 0.4));
  for (const GradCheckRecord& rec : report.records) CHECK(rec.straddles_kink);
}

TEST_CASE("report TSV has the documented columns") {
  const CheckInstance inst = make_check_instance({2, 2, 2}, sbaf_spec(), 1);
  const GradCheckReport report = check_network(inst.net, inst.input, inst.targets);
  std::stringstream out;
  write_tsv(out, report);
  std::string header;
  std::getline(out, header);
  CHECK(header == "param\tanalytic\tnumeric\trel_error");
  std::string row;
  int rows = 0;
  while (std::getline(out, row)) {
    int tabs = 0;
    for (char ch : row) tabs += ch == '\t';
    CHECK(tabs == 3);
    ++rows;
  }
  CHECK(rows == static_cast<int>(report.records.size()));
  CHECK(report.records.front().param == "W1[0,0]");
  CHECK(report.records.back().param == "b2[1]");
}

TEST_CASE("make_check_instance is deterministic and keeps error terms scaled") {
  const CheckInstance a = make_check_instance({3, 5, 2}, sbaf_spec(), 77);
  const CheckInstance b = make_check_instance({3, 5, 2}, sbaf_spec(), 77);
  CHECK(a.input == b.input);
  CHECK(a.targets == b.targets);
  CHECK(a.net.weights[0] == b.net.weights[0]);

  const ForwardTrace trace = forward(a.net, a.input);
  for (Eigen::Index i = 0; i < a.targets.size(); ++i)
    CHECK(std::abs(a.targets[i] - trace.outputs()[i]) >= 0.1 - 1e-12);
}
