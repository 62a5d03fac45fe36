// End-to-end checks of the command-line tool (path injected via SBAF_CLI_PATH).
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

struct CmdResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "sbaf_cli_scratch";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CmdResult run_cli(const std::string& args) {
  const fs::path dir = scratch_dir();
  const std::string cmd = "cd '" + dir.string() + "' && '" SBAF_CLI_PATH "' " + args +
                          " > cli_stdout.txt 2> cli_stderr.txt";
  const int raw = std::system(cmd.c_str());
  CmdResult result;
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(dir / "cli_stdout.txt");
  result.err = slurp(dir / "cli_stderr.txt");
  return result;
}

std::vector<std::vector<std::string>> parse_tsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double field_after(const std::string& text, const std::string& key) {
  for (const auto& row : parse_tsv(text))
    if (row.size() >= 2 && row[0] == key) return std::stod(row[1]);
  FAIL("key not found in output: " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("synth writes deterministic CSV and rejects bad sizes") {
  CHECK(run_cli("synth --kind blobs2 --n 200 --seed 1 --out blobs.csv").status == 0);
  CHECK(run_cli("synth --kind blobs2 --n 200 --seed 1 --out blobs_again.csv").status == 0);
  const std::string a = slurp(scratch_dir() / "blobs.csv");
  const std::string b = slurp(scratch_dir() / "blobs_again.csv");
  CHECK(a == b);
  CHECK(a.rfind("x1,x2,label\n", 0) == 0);

  CHECK(run_cli("synth --kind blobs2 --n 1 --seed 1").status != 0);
}

TEST_CASE("train runs the documented smoke pipeline") {
  REQUIRE(run_cli("synth --kind blobs2 --n 200 --seed 1 --out blobs.csv").status == 0);
  const std::string flags =
      "train --data blobs.csv --label label --layers 2,4,2 --alpha 0.5 --k 1 "
      "--lr 0.05 --epochs 500 --seed 7";
  const CmdResult first = run_cli(flags);
  CHECK(first.status == 0);
  CHECK(field_after(first.out, "train_accuracy") >= 0.95);
  CHECK(fs::exists(scratch_dir() / "model.sbafnet"));
  CHECK(fs::exists(scratch_dir() / "loss_history.tsv"));

  const std::string history = slurp(scratch_dir() / "loss_history.tsv");
  const auto rows = parse_tsv(history);
  REQUIRE(rows.size() == 501);  // header + one row per epoch
  CHECK(rows[0] == std::vector<std::string>{"epoch", "mean_loss"});
  const double first_loss = std::stod(rows[1][1]);
  const double last_loss = std::stod(rows[500][1]);
  CHECK(last_loss < first_loss);

  const std::string model = slurp(scratch_dir() / "model.sbafnet");
  const CmdResult second = run_cli(flags);
  CHECK(second.status == 0);
  CHECK(slurp(scratch_dir() / "loss_history.tsv") == history);  // byte-identical rerun
  CHECK(slurp(scratch_dir() / "model.sbafnet") == model);
}

TEST_CASE("eval reports on a saved model") {
  const CmdResult eval = run_cli("eval --model model.sbafnet --data blobs.csv --label label");
  CHECK(eval.status == 0);
  CHECK(eval.out.find("accuracy") != std::string::npos);

  const CmdResult tsv = run_cli("eval --model model.sbafnet --data blobs.csv --label label --tsv");
  CHECK(tsv.status == 0);
  CHECK(field_after(tsv.out, "accuracy") >= 0.9);
}

TEST_CASE("train flag validation") {
  CHECK(run_cli("train --label label --layers 2,4,2").status != 0);  // missing --data
  const CmdResult bad_alpha =
      run_cli("train --data blobs.csv --label label --layers 2,4,2 --alpha 1.5");
  CHECK(bad_alpha.status != 0);
  CHECK(bad_alpha.err.find("alpha") != std::string::npos);
  const CmdResult bad_layers =
      run_cli("train --data blobs.csv --label label --layers 3,4,2 --epochs 1");
  CHECK(bad_layers.status != 0);
  CHECK(bad_layers.err.find("--layers") != std::string::npos);
}

TEST_CASE("gradcheck exit codes follow the threshold") {
  const CmdResult ok = run_cli("gradcheck");
  CHECK(ok.status == 0);
  const auto rows = parse_tsv(ok.out);
  REQUIRE(!rows.empty());
  CHECK(rows[0] == std::vector<std::string>{"param", "analytic", "numeric", "rel_error"});
  CHECK(rows.size() == 1 + 12);  // [2,2,2]: 8 weights + 4 biases

  CHECK(run_cli("gradcheck --flip-sign").status != 0);
  CHECK(run_cli("gradcheck --flip-sign --threshold 10").status == 0);
  CHECK(run_cli("gradcheck --layers 3,5,2 --activation sigmoid --seed 3").status == 0);
}

TEST_CASE("emit-curve tabulates the activation") {
  const CmdResult curve = run_cli("emit-curve --alpha 0.5 --k 1 --grid 101");
  CHECK(curve.status == 0);
  const auto rows = parse_tsv(curve.out);
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"x", "y", "dydx", "d2ydx2"});

  int mid = -1;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::abs(std::stod(rows[i][0]) - 0.5) < 1e-9) mid = static_cast<int>(i);
  REQUIRE(mid > 0);
  CHECK(std::stod(rows[mid][1]) == doctest::Approx(0.666667).epsilon(1e-5));
  CHECK(std::abs(std::stod(rows[mid][2])) <= 1e-9);

  // y falls toward alpha and rises after it
  for (int i = 2; i <= mid; ++i)
    CHECK(std::stod(rows[i][1]) <= std::stod(rows[i - 1][1]) + 1e-12);
  for (std::size_t i = mid + 1; i < rows.size(); ++i)
    CHECK(std::stod(rows[i][1]) >= std::stod(rows[i - 1][1]) - 1e-12);

  const CmdResult flat = run_cli("emit-curve --k 0 --grid 11");
  CHECK(flat.status == 0);
  for (const auto& row : parse_tsv(flat.out))
    if (row.size() == 4 && row[0] != "x") CHECK(std::stod(row[1]) == 1.0);
}

TEST_CASE("emit-curve alpha sweep emits a long-format surface") {
  const CmdResult sweep = run_cli("emit-curve --alpha-sweep 0.2:0.8:4 --grid 21");
  CHECK(sweep.status == 0);
  const auto rows = parse_tsv(sweep.out);
  REQUIRE(rows.size() == 1 + 4 * 21);
  CHECK(rows[0] == std::vector<std::string>{"alpha", "x", "y"});
  CHECK(std::stod(rows[1][0]) == doctest::Approx(0.2));
  CHECK(std::stod(rows.back()[0]) == doctest::Approx(0.8));

  CHECK(run_cli("emit-curve --alpha-sweep nonsense").status != 0);
}

TEST_CASE("bench-approx reports non-increasing error columns") {
  const CmdResult bench = run_cli("bench-approx --segments 1,2,4,8 --grid 2001");
  CHECK(bench.status == 0);
  const auto rows = parse_tsv(bench.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "segments");
  double prev_g = 1e300, prev_y = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double g = std::stod(rows[i][1]);
    const double y = std::stod(rows[i][2]);
    CHECK(g <= prev_g);
    CHECK(y <= prev_y);
    prev_g = g;
    prev_y = y;
    CHECK(std::stod(rows[i][3]) > 0.0);  // timings present, values not asserted
    CHECK(std::stod(rows[i][4]) > 0.0);
  }
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.2428).epsilon(5e-3));
}
