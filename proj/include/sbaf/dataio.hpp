// dataio.hpp: CSV ingestion, min-max normalization into the activation's live
// domain, synthetic dataset generation and stratified splitting.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sbafnet {

// Features are normalized into [kFeatureLo, kFeatureHi] so they sit strictly
// inside the activation domain without leaning on the clamp.
inline constexpr double kFeatureLo = 0.01;
inline constexpr double kFeatureHi = 0.99;

/// Parsed CSV before normalization: numeric features, string labels, row order
/// preserved.
struct RawTable {
  std::vector<std::string> feature_names;
  std::string label_name;
  Eigen::MatrixXd features;  // n_samples x n_features
  std::vector<std::string> labels;

  int n_samples() const { return static_cast<int>(features.rows()); }
  int n_features() const { return static_cast<int>(features.cols()); }
};

struct Dataset {
  Eigen::MatrixXd features;  // n_samples x n_features, values in [kFeatureLo, kFeatureHi]
  std::vector<int> labels;   // dense class ids in [0, n_classes)
  std::vector<std::string> class_names;
  std::vector<std::pair<double, double>> normalization;  // per-feature raw (min, max)

  int n_samples() const { return static_cast<int>(features.rows()); }
  int n_features() const { return static_cast<int>(features.cols()); }
  int n_classes() const { return static_cast<int>(class_names.size()); }
};

/// Reads a headered CSV; the named label column may sit anywhere. Errors name
/// the offending row and column.
RawTable load_csv(const std::string& path, const std::string& label_column);

/// Per-feature affine map [min, max] -> [0.01, 0.99]; constant features map to
/// 0.5. Label strings become dense ids in first-appearance order.
Dataset normalize(const RawTable& table);

/// Re-applies a stored per-feature range to a raw value; out-of-range inputs
/// clamp into [0.01, 0.99].
double apply_normalization(double raw, const std::pair<double, double>& feature_range);
Eigen::VectorXd apply_normalization(const Eigen::VectorXd& raw,
                                    const std::vector<std::pair<double, double>>& normalization);

enum class SyntheticKind { Blobs2, Habitability3 };

const char* to_string(SyntheticKind kind);
SyntheticKind parse_synthetic_kind(std::string_view name);

/// Deterministic 2-D generators. Blobs2: two well-separated Gaussian blobs.
/// Habitability3: three classes ordered along a temperature-like axis; `overlap`
/// in [0, 1] widens the adjacent mesoplanet/psychroplanet pair, the hard boundary.
Dataset synthesize(SyntheticKind kind, int n_samples, std::uint64_t seed, double overlap = 0.35);

/// Stratified split; per-class proportions hold to within one sample and each
/// class keeps at least one sample on each side. Classes need >= 2 samples.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// Writes a dataset back to CSV (features at 17 significant digits, label last).
void write_csv(std::ostream& out, const Dataset& ds,
               const std::vector<std::string>& feature_names, const std::string& label_column);

}  // namespace sbafnet
