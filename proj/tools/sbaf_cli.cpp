// sbaf_cli.cpp: command-line front end. Subcommands: synth, train, eval,
// gradcheck, emit-curve, bench-approx.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbaf/activation.hpp"
#include "sbaf/approx.hpp"
#include "sbaf/dataio.hpp"
#include "sbaf/format.hpp"
#include "sbaf/gradcheck.hpp"
#include "sbaf/metrics.hpp"
#include "sbaf/network.hpp"

namespace {

using namespace sbafnet;

volatile double g_bench_sink = 0.0;

// Writes to the path when given, otherwise to stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

CLI::Validator open_unit_interval(double lo, double hi) {
  return CLI::Validator(
      [lo, hi](std::string& s) -> std::string {
        double v = 0.0;
        try {
          v = std::stod(s);
        } catch (const std::exception&) {
          return "value '" + s + "' is not a number";
        }
        if (!(v > lo && v < hi))
          return "value " + s + " not in the open interval (" + format_g(lo, 6) + ", " +
                 format_g(hi, 6) + ")";
        return {};
      },
      "OPEN_RANGE");
}

struct ActivationFlags {
  std::string kind = "sbaf";
  double k = 1.0;
  double alpha = 0.5;
  double eps = 1e-6;

  void add_to(CLI::App* cmd, bool with_kind) {
    if (with_kind)
      cmd->add_option("--activation", kind, "activation: sbaf, sigmoid or relu")
          ->check(CLI::IsMember({"sbaf", "sigmoid", "relu"}))
          ->capture_default_str();
    cmd->add_option("--k", k, "SBAF kernel scale k >= 0")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "SBAF exponent alpha in [0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--eps", eps, "domain clamp margin in (0, 0.5)")
        ->check(open_unit_interval(0.0, 0.5))
        ->capture_default_str();
  }

  ActivationSpec spec() const {
    return ActivationSpec(parse_activation_kind(kind), k, alpha, eps);
  }
};

template <typename F>
double ns_per_eval(F&& f, int n_grid, double lo, double hi) {
  using clock = std::chrono::steady_clock;
  long reps = 1;
  for (;;) {
    double acc = 0.0;
    const auto t0 = clock::now();
    for (long rep = 0; rep < reps; ++rep)
      for (int i = 0; i < n_grid; ++i) {
        const double x = lo + (hi - lo) * (static_cast<double>(i) / (n_grid - 1));
        acc += f(x);
      }
    const auto t1 = clock::now();
    g_bench_sink = acc;
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    if (ns > 5e6 || reps >= (1L << 22)) return ns / (static_cast<double>(reps) * n_grid);
    reps *= 2;
  }
}

// ---- subcommand bodies ----

struct SynthOpts {
  std::string kind = "blobs2";
  int n = 200;
  std::uint64_t seed = 1;
  double overlap = 0.35;
  std::string out;
};

void run_synth(const SynthOpts& o) {
  const SyntheticKind kind = parse_synthetic_kind(o.kind);
  const Dataset ds = synthesize(kind, o.n, o.seed, o.overlap);
  const std::vector<std::string> names = kind == SyntheticKind::Blobs2
                                             ? std::vector<std::string>{"x1", "x2"}
                                             : std::vector<std::string>{"temp", "flux"};
  OutputTarget target(o.out);
  write_csv(target.stream(), ds, names, "label");
}

struct TrainOpts {
  std::string data;
  std::string label;
  std::vector<int> layers;
  ActivationFlags act;
  double lr = 0.05;
  int epochs = 100;
  std::uint64_t seed = 1;
  double train_fraction = 0.8;
  bool no_shuffle = false;
  std::string model_out = "model.sbafnet";
  std::string history_out = "loss_history.tsv";
};

void run_train(const TrainOpts& o) {
  const RawTable raw = load_csv(o.data, o.label);
  const Dataset full = normalize(raw);
  const auto [train_ds, val_ds] = split(full, o.train_fraction, o.seed);

  if (o.layers.front() != full.n_features())
    throw std::runtime_error("--layers input width " + std::to_string(o.layers.front()) +
                             " does not match the " + std::to_string(full.n_features()) +
                             " feature columns");
  if (o.layers.back() != full.n_classes())
    throw std::runtime_error("--layers output width " + std::to_string(o.layers.back()) +
                             " does not match the " + std::to_string(full.n_classes()) +
                             " classes");

  Network net = init_network(o.layers, o.act.spec(), o.seed);
  TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.epochs = o.epochs;
  cfg.seed = o.seed;
  cfg.shuffle = !o.no_shuffle;
  const std::vector<double> history = train(net, train_ds, cfg);

  save_network(o.model_out, net);
  {
    std::ofstream hist(o.history_out);
    if (!hist) throw std::runtime_error("cannot open '" + o.history_out + "' for writing");
    hist << "epoch\tmean_loss\n";
    for (std::size_t e = 0; e < history.size(); ++e)
      hist << (e + 1) << '\t' << format_g17(history[e]) << '\n';
  }

  const EvalReport train_report = evaluate(net, train_ds);
  const EvalReport val_report = evaluate(net, val_ds);
  std::cout << "train_samples\t" << train_ds.n_samples() << '\n'
            << "val_samples\t" << val_ds.n_samples() << '\n'
            << "final_mean_loss\t" << format_g17(history.back()) << '\n'
            << "train_accuracy\t" << format_g17(train_report.accuracy) << '\n'
            << "val_accuracy\t" << format_g17(val_report.accuracy) << '\n'
            << "model\t" << o.model_out << '\n'
            << "history\t" << o.history_out << '\n';
}

struct EvalOpts {
  std::string model;
  std::string data;
  std::string label;
  bool tsv = false;
};

void run_eval(const EvalOpts& o) {
  const Network net = load_network(o.model);
  const Dataset ds = normalize(load_csv(o.data, o.label));
  const EvalReport report = evaluate(net, ds);
  if (o.tsv)
    write_tsv(std::cout, report, ds.class_names);
  else
    write_text(std::cout, report, ds.class_names);
}

struct GradcheckOpts {
  std::vector<int> layers = {2, 2, 2};
  ActivationFlags act;
  std::uint64_t seed = 1;
  double step = 1e-6;
  double threshold = 1e-6;
  bool flip_sign = false;
  std::string out;
};

int run_gradcheck(const GradcheckOpts& o) {
  const CheckInstance inst = make_check_instance(o.layers, o.act.spec(), o.seed);
  const GradCheckReport report =
      check_network(inst.net, inst.input, inst.targets, o.step, o.flip_sign);
  OutputTarget target(o.out);
  write_tsv(target.stream(), report);
  std::cerr << "max_rel_error " << format_g(report.max_rel_error, 6) << " (threshold "
            << format_g(o.threshold, 6) << ", h " << format_g(o.step, 6) << ")\n";
  return report.max_rel_error <= o.threshold ? 0 : 1;
}

struct CurveOpts {
  ActivationFlags act;
  int grid = 101;
  std::string alpha_sweep;
  std::string out;
};

void run_emit_curve(const CurveOpts& o) {
  OutputTarget target(o.out);
  std::ostream& out = target.stream();

  if (!o.alpha_sweep.empty()) {
    double a = 0.0, b = 0.0;
    int n = 0;
    if (std::sscanf(o.alpha_sweep.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
      throw std::runtime_error("--alpha-sweep expects a:b:n with n >= 1");
    out << "alpha\tx\ty\n";
    for (int j = 0; j < n; ++j) {
      const double alpha = n == 1 ? a : a + (b - a) * (static_cast<double>(j) / (n - 1));
      const ActivationSpec spec = sbaf_spec(o.act.k, alpha, o.act.eps);
      const double lo = spec.clamp_margin, hi = 1.0 - spec.clamp_margin;
      for (int i = 0; i < o.grid; ++i) {
        const double x = lo + (hi - lo) * (static_cast<double>(i) / (o.grid - 1));
        out << format_g(alpha, 6) << '\t' << format_g(x, 6) << '\t' << format_g(sbaf(x, spec), 6)
            << '\n';
      }
    }
    return;
  }

  const ActivationSpec spec = sbaf_spec(o.act.k, o.act.alpha, o.act.eps);
  const double lo = spec.clamp_margin, hi = 1.0 - spec.clamp_margin;
  out << "x\ty\tdydx\td2ydx2\n";
  for (int i = 0; i < o.grid; ++i) {
    const double x = lo + (hi - lo) * (static_cast<double>(i) / (o.grid - 1));
    out << format_g(x, 6) << '\t' << format_g(sbaf(x, spec), 6) << '\t'
        << format_g(sbaf_derivative(x, spec), 6) << '\t'
        << format_g(sbaf_second_derivative(x, spec), 6) << '\n';
  }
}

struct BenchOpts {
  std::vector<int> segments = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  int grid = 10001;
  ActivationFlags act;
  std::string out;
};

void run_bench_approx(const BenchOpts& o) {
  const ActivationSpec spec = sbaf_spec(o.act.k, o.act.alpha, o.act.eps);
  const double lo = spec.clamp_margin, hi = 1.0 - spec.clamp_margin;
  OutputTarget target(o.out);
  std::ostream& out = target.stream();
  out << "segments\tmax_err_g\tmax_err_y\tns_per_eval_exact\tns_per_eval_approx\n";

  const double ns_exact =
      ns_per_eval([&spec](double x) { return sbaf(x, spec); }, o.grid, lo, hi);
  for (int n : o.segments) {
    const PiecewiseKernel pk = build_kernel(spec, n);
    const ApproxError err = measure_error(pk, o.grid);
    const double ns_approx =
        ns_per_eval([&pk](double x) { return eval_approx(pk, x); }, o.grid, lo, hi);
    char ns_a[32], ns_b[32];
    std::snprintf(ns_a, sizeof(ns_a), "%.1f", ns_exact);
    std::snprintf(ns_b, sizeof(ns_b), "%.1f", ns_approx);
    out << n << '\t' << format_g(err.max_abs_error_g, 6) << '\t'
        << format_g(err.max_abs_error_y, 6) << '\t' << ns_a << '\t' << ns_b << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SBAF feed-forward network toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  auto synth_opts = std::make_shared<SynthOpts>();
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic dataset as CSV");
  synth->add_option("--kind", synth_opts->kind, "blobs2 or habitability3")
      ->check(CLI::IsMember({"blobs2", "habitability3"}))
      ->capture_default_str();
  synth->add_option("--n", synth_opts->n, "number of samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--seed", synth_opts->seed, "generator seed")->capture_default_str();
  synth->add_option("--overlap", synth_opts->overlap, "meso/psychro overlap in [0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth->add_option("--out", synth_opts->out, "output CSV path (default: stdout)");
  synth->callback([synth_opts] { run_synth(*synth_opts); });

  auto train_opts = std::make_shared<TrainOpts>();
  CLI::App* train_cmd = app.add_subcommand("train", "train a network on a CSV dataset");
  train_cmd->add_option("--data", train_opts->data, "input CSV path")->required();
  train_cmd->add_option("--label", train_opts->label, "label column name")->required();
  train_cmd->add_option("--layers", train_opts->layers, "layer sizes, e.g. 2,4,2")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  train_opts->act.add_to(train_cmd, true);
  train_cmd->add_option("--lr", train_opts->lr, "learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--epochs", train_opts->epochs, "training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--seed", train_opts->seed, "init and shuffle seed")
      ->capture_default_str();
  train_cmd->add_option("--train-fraction", train_opts->train_fraction,
                        "fraction of samples used for training")
      ->check(open_unit_interval(0.0, 1.0))
      ->capture_default_str();
  train_cmd->add_flag("--no-shuffle", train_opts->no_shuffle, "keep sample order fixed");
  train_cmd->add_option("--model-out", train_opts->model_out, "model file path")
      ->capture_default_str();
  train_cmd->add_option("--history-out", train_opts->history_out, "loss history TSV path")
      ->capture_default_str();
  train_cmd->callback([train_opts] { run_train(*train_opts); });

  auto eval_opts = std::make_shared<EvalOpts>();
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a saved model on a CSV dataset");
  eval_cmd->add_option("--model", eval_opts->model, "model file path")->required();
  eval_cmd->add_option("--data", eval_opts->data, "input CSV path")->required();
  eval_cmd->add_option("--label", eval_opts->label, "label column name")->required();
  eval_cmd->add_flag("--tsv", eval_opts->tsv, "emit the report as TSV");
  eval_cmd->callback([eval_opts] { run_eval(*eval_opts); });

  auto gc_opts = std::make_shared<GradcheckOpts>();
  CLI::App* gc = app.add_subcommand("gradcheck",
                                    "compare analytic gradients against finite differences");
  gc->add_option("--layers", gc_opts->layers, "layer sizes, e.g. 2,2,2")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gc_opts->act.add_to(gc, true);
  gc->add_option("--seed", gc_opts->seed, "instance seed")->capture_default_str();
  gc->add_option("--step", gc_opts->step, "central-difference step h")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gc->add_option("--threshold", gc_opts->threshold, "max relative error for exit status 0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gc->add_flag("--flip-sign", gc_opts->flip_sign,
               "use the sign-flipped SBAF derivative (diagnostic)");
  gc->add_option("--out", gc_opts->out, "report TSV path (default: stdout)");
  gc->callback([gc_opts, &exit_code] { exit_code = run_gradcheck(*gc_opts); });

  auto curve_opts = std::make_shared<CurveOpts>();
  CLI::App* curve = app.add_subcommand("emit-curve", "tabulate y, dy/dx and d2y/dx2 as TSV");
  curve_opts->act.add_to(curve, false);
  curve->add_option("--grid", curve_opts->grid, "number of grid points")
      ->check(CLI::Range(2, 100000000))
      ->capture_default_str();
  curve->add_option("--alpha-sweep", curve_opts->alpha_sweep,
                    "a:b:n -> long-format alpha/x/y surface table");
  curve->add_option("--out", curve_opts->out, "output TSV path (default: stdout)");
  curve->callback([curve_opts] { run_emit_curve(*curve_opts); });

  auto bench_opts = std::make_shared<BenchOpts>();
  CLI::App* bench = app.add_subcommand("bench-approx",
                                       "accuracy and throughput of the piecewise kernel");
  bench->add_option("--segments", bench_opts->segments, "segment counts, e.g. 1,2,4,8")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--grid", bench_opts->grid, "evaluation grid size")
      ->check(CLI::Range(2, 100000000))
      ->capture_default_str();
  bench_opts->act.eps = 0.01;  // the usual plotting window for the approximation
  bench_opts->act.add_to(bench, false);
  bench->add_option("--out", bench_opts->out, "output TSV path (default: stdout)");
  bench->callback([bench_opts] { run_bench_approx(*bench_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
