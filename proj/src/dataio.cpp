#include "sbaf/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "sbaf/format.hpp"
#include "sbaf/random.hpp"

namespace sbafnet {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != cell.size() || cell.empty())
    throw std::runtime_error("load_csv: cannot parse '" + cell + "' as a number at row " +
                             std::to_string(row) + ", column '" + column + "'");
  return value;
}

}  // namespace

RawTable load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: '" + path + "' is empty");
  strip_cr(line);

  const std::vector<std::string> header = split_fields(line);
  int label_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_idx = static_cast<int>(i);
  if (label_idx < 0)
    throw std::runtime_error("load_csv: label column '" + label_column + "' not found in '" +
                             path + "'");
  if (header.size() < 2)
    throw std::runtime_error("load_csv: '" + path + "' has no feature columns");

  RawTable table;
  table.label_name = header[static_cast<std::size_t>(label_idx)];
  for (std::size_t i = 0; i < header.size(); ++i)
    if (static_cast<int>(i) != label_idx) table.feature_names.push_back(header[i]);

  std::vector<std::vector<double>> rows;
  int row_number = 0;  // 1-based data row, header excluded
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    ++row_number;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size())
      throw std::runtime_error("load_csv: row " + std::to_string(row_number) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(header.size()));
    std::vector<double> row;
    row.reserve(header.size() - 1);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (static_cast<int>(i) == label_idx) {
        table.labels.push_back(fields[i]);
      } else {
        row.push_back(parse_cell(fields[i], row_number, header[i]));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: '" + path + "' holds an empty dataset");

  table.features.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return table;
}

Dataset normalize(const RawTable& table) {
  if (table.n_samples() < 1) throw std::invalid_argument("normalize: empty table");

  Dataset ds;
  ds.features.resize(table.features.rows(), table.features.cols());
  ds.normalization.reserve(static_cast<std::size_t>(table.n_features()));

  for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
    const double lo = table.features.col(c).minCoeff();
    const double hi = table.features.col(c).maxCoeff();
    ds.normalization.emplace_back(lo, hi);
    for (Eigen::Index r = 0; r < table.features.rows(); ++r)
      ds.features(r, c) = apply_normalization(table.features(r, c), {lo, hi});
  }

  std::unordered_map<std::string, int> ids;
  ds.labels.reserve(table.labels.size());
  for (const std::string& name : table.labels) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(name);
    ds.labels.push_back(it->second);
  }
  return ds;
}

double apply_normalization(double raw, const std::pair<double, double>& feature_range) {
  const auto [lo, hi] = feature_range;
  if (!(hi > lo)) return 0.5;  // constant feature
  const double v = kFeatureLo + (raw - lo) / (hi - lo) * (kFeatureHi - kFeatureLo);
  return std::min(std::max(v, kFeatureLo), kFeatureHi);
}

Eigen::VectorXd apply_normalization(const Eigen::VectorXd& raw,
                                    const std::vector<std::pair<double, double>>& normalization) {
  if (raw.size() != static_cast<Eigen::Index>(normalization.size()))
    throw std::invalid_argument("apply_normalization: feature width mismatch");
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i)
    out[i] = apply_normalization(raw[i], normalization[static_cast<std::size_t>(i)]);
  return out;
}

const char* to_string(SyntheticKind kind) {
  return kind == SyntheticKind::Blobs2 ? "blobs2" : "habitability3";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "blobs2") return SyntheticKind::Blobs2;
  if (name == "habitability3") return SyntheticKind::Habitability3;
  throw std::invalid_argument("unknown synthetic kind '" + std::string(name) +
                              "' (expected blobs2 or habitability3)");
}

namespace {

double clip_feature(double v) { return std::min(std::max(v, kFeatureLo), kFeatureHi); }

struct ClassModel {
  std::string name;
  double c0, s0;  // feature 0: center, sigma
  double c1, s1;  // feature 1
};

Dataset from_class_models(const std::vector<ClassModel>& models, int n_samples,
                          std::uint64_t seed) {
  const int n_classes = static_cast<int>(models.size());
  std::vector<int> counts(static_cast<std::size_t>(n_classes), n_samples / n_classes);
  for (int i = 0; i < n_samples % n_classes; ++i) ++counts[static_cast<std::size_t>(i)];

  Dataset ds;
  ds.features.resize(n_samples, 2);
  ds.labels.reserve(static_cast<std::size_t>(n_samples));
  std::mt19937_64 rng(seed);
  Eigen::Index row = 0;
  for (int c = 0; c < n_classes; ++c) {
    const ClassModel& m = models[static_cast<std::size_t>(c)];
    ds.class_names.push_back(m.name);
    for (int i = 0; i < counts[static_cast<std::size_t>(c)]; ++i, ++row) {
      ds.features(row, 0) = clip_feature(m.c0 + m.s0 * normal_unit(rng));
      ds.features(row, 1) = clip_feature(m.c1 + m.s1 * normal_unit(rng));
      ds.labels.push_back(c);
    }
  }
  ds.normalization.assign(2, {kFeatureLo, kFeatureHi});  // already in the target range
  return ds;
}

}  // namespace

Dataset synthesize(SyntheticKind kind, int n_samples, std::uint64_t seed, double overlap) {
  const int n_classes = kind == SyntheticKind::Blobs2 ? 2 : 3;
  if (n_samples < n_classes)
    throw std::invalid_argument("synthesize: need at least one sample per class");
  if (!(overlap >= 0.0 && overlap <= 1.0))
    throw std::invalid_argument("synthesize: overlap must lie in [0, 1]");

  if (kind == SyntheticKind::Blobs2) {
    // Placed at opposite corners: the blobs differ strongly in distance from the
    // origin, which is the direction a bias-0.5 SBAF layer separates best.
    const std::vector<ClassModel> models = {
        {"a", 0.15, 0.05, 0.15, 0.05},
        {"b", 0.85, 0.05, 0.85, 0.05},
    };
    return from_class_models(models, n_samples, seed);
  }

  // Three classes along a temperature-like axis (feature 0). The non-habitable
  // class sits far from the other two; the meso/psychro pair shares a soft
  // boundary whose width scales with `overlap`.
  const double st = 0.03 + 0.10 * overlap;
  const std::vector<ClassModel> models = {
      {"non_habitable", 0.10, 0.05, 0.15, 0.08},
      {"mesoplanet", 0.55, st, 0.55, 0.08},
      {"psychroplanet", 0.72, st, 0.70, 0.08},
  };
  return from_class_models(models, n_samples, seed);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");

  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(ds.n_classes()));
  for (int i = 0; i < ds.n_samples(); ++i)
    by_class[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])].push_back(i);
  for (int c = 0; c < ds.n_classes(); ++c)
    if (!by_class[static_cast<std::size_t>(c)].empty() &&
        by_class[static_cast<std::size_t>(c)].size() < 2)
      throw std::invalid_argument("split: class '" + ds.class_names[static_cast<std::size_t>(c)] +
                                  "' has fewer than 2 samples");

  std::mt19937_64 rng(seed);
  std::vector<int> train_idx, test_idx;
  for (auto& group : by_class) {
    if (group.empty()) continue;
    shuffle_indices(group, rng);
    const auto n = static_cast<long>(group.size());
    long n_train = std::lround(train_fraction * static_cast<double>(n));
    n_train = std::clamp(n_train, 1L, n - 1);
    train_idx.insert(train_idx.end(), group.begin(), group.begin() + n_train);
    test_idx.insert(test_idx.end(), group.begin() + n_train, group.end());
  }

  auto take = [&ds](const std::vector<int>& idx) {
    Dataset out;
    out.class_names = ds.class_names;
    out.normalization = ds.normalization;
    out.features.resize(static_cast<Eigen::Index>(idx.size()), ds.features.cols());
    out.labels.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(idx[i]);
      out.labels.push_back(ds.labels[static_cast<std::size_t>(idx[i])]);
    }
    return out;
  };
  return {take(train_idx), take(test_idx)};
}

void write_csv(std::ostream& out, const Dataset& ds,
               const std::vector<std::string>& feature_names, const std::string& label_column) {
  if (static_cast<int>(feature_names.size()) != ds.n_features())
    throw std::invalid_argument("write_csv: feature name count mismatch");
  for (const std::string& name : feature_names) out << name << ',';
  out << label_column << '\n';
  for (int r = 0; r < ds.n_samples(); ++r) {
    for (int c = 0; c < ds.n_features(); ++c) out << format_g17(ds.features(r, c)) << ',';
    out << ds.class_names[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(r)])]
        << '\n';
  }
}

}  // namespace sbafnet
