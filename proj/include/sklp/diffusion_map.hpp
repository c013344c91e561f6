// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace sklp {

struct DiffusionConfig {
  std::optional<double> bandwidth;  // unset: median pairwise distance of the fitted data
  int embed_dim = 2;
  int time = 1;
  bool drop_trivial = true;

  void validate() const;
};

/// Random-walk embedding fitted on the columns of `train_points`.
struct DiffusionModel {
  Eigen::MatrixXd train_points;  // d x n
  double bandwidth = 1.0;
  int time = 1;
  bool drop_trivial = true;
  Eigen::VectorXd eigenvalues;   // full spectrum of T, descending
  Eigen::MatrixXd eigenvectors;  // right eigenvectors of T (unit 2-norm), one per column
  Eigen::MatrixXd embedding;     // n x embed_dim
  Eigen::VectorXd row_sums;      // sum_j W_ij

  int embed_dim() const { return static_cast<int>(embedding.cols()); }
  /// Index into eigenvalues/eigenvectors of embedding column `l`.
  int source_index(int l) const { return l + (drop_trivial ? 1 : 0); }
};

/// W_ij = exp(-|x_i - x_j|^2 / bandwidth^2).
Eigen::MatrixXd affinity(const Eigen::MatrixXd& points, double bandwidth);

/// Row-normalised transition matrix T_ij = W_ij / sum_j W_ij.
Eigen::MatrixXd transition(const Eigen::MatrixXd& w);

/// Eigendecomposes T through the symmetric conjugate D^{1/2} T D^{-1/2} and
/// scales each retained right eigenvector by lambda^t.
DiffusionModel diffusion_fit(const Eigen::MatrixXd& points, const DiffusionConfig& config);

/// Nystrom extension of new points (d x m) -> m x embed_dim.
Eigen::MatrixXd diffusion_extend(const DiffusionModel& model, const Eigen::MatrixXd& points);

/// CSV with an optional `label` column followed by c1..c{embed_dim}.
std::string format_embedding_csv(const Eigen::MatrixXd& embedding, std::span<const std::string> labels = {});

nlohmann::json to_json(const DiffusionModel& model);

}  // namespace sklp
