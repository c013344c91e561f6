// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sklp {

/// Feature columns with dense class labels and optional group (person/video) ids.
///
/// Invariants (checked by validate()): features.cols() == labels.size()
/// (== groups->size() when present), labels in [0, class_count), every class
/// occurs at least once, all features finite.
struct LabeledDataset {
  Eigen::MatrixXd features;  // D x n, one sample per column
  std::vector<int> labels;
  std::optional<std::vector<int>> groups;
  int class_count = 0;
  std::vector<std::string> class_names;  // original label strings, indexed by dense id
  std::vector<std::string> group_names;  // original group strings, indexed by dense id

  Eigen::Index dim() const { return features.rows(); }
  Eigen::Index size() const { return features.cols(); }
  bool has_groups() const { return groups.has_value(); }

  /// Throws DataError describing the first violated invariant.
  void validate() const;

  /// Samples per class.
  std::vector<int> class_sizes() const;

  /// Columns `indices` as a new dataset with the same classes. Throws
  /// DataError when a class ends up empty.
  LabeledDataset subset(std::span<const int> indices) const;
};

/// Feature columns `indices` of `x`.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, std::span<const int> indices);

/// Entries `indices` of `values`.
std::vector<int> select(std::span<const int> values, std::span<const int> indices);

/// Reads a CSV with a header row, a `label` column, an optional `group`
/// column and numeric feature columns. Labels and groups are re-indexed to
/// dense ids in order of first appearance.
LabeledDataset load_csv(const std::filesystem::path& path);
LabeledDataset parse_csv(const std::string& text);

/// Writes `label`, optional `group`, then features as f0..f{D-1} with
/// shortest round-trip number formatting. Written atomically.
void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path);
std::string format_csv(const LabeledDataset& dataset);

/// Random generator used by all synthetic data: std::mt19937_64.
inline constexpr const char* kRandomEngineId = "mt19937_64";

/// K isotropic Gaussian blobs. Class means sit at mutual distance >= separation
/// (scaled simplex of coordinate axes when K <= D, an integer lattice otherwise),
/// rotated by a random orthonormal frame. With `groups` > 0, sample i of each
/// class gets group i % groups.
LabeledDataset gen_gaussian_classes(int classes, int per_class, int dim, double spread,
                                    double separation, std::uint64_t seed, int groups = 0);

/// K concentric rings of radius 1..K in a random 2-plane through the origin of
/// R^dim, with isotropic Gaussian noise of standard deviation `noise` added in
/// every ambient coordinate. Group assignment as in gen_gaussian_classes.
LabeledDataset gen_ring_classes(int classes, int per_class, double noise, int dim,
                                std::uint64_t seed, int groups = 0);

struct Fold {
  std::vector<int> train;
  std::vector<int> test;
};

struct SplitPlan {
  std::vector<Fold> folds;
};

/// One fold per distinct group id (ascending); that group forms the test side.
SplitPlan leave_one_group_out(const LabeledDataset& dataset);

}  // namespace sklp
