// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sklp/dataset.hpp"
#include "sklp/projection_model.hpp"

namespace sklp {

/// Hyperparameters of the supervised kernel linear projection.
///
/// Empty `class_weights` selects lambda_k = n_o / (K n_k), which puts the intra-
/// and inter-class kernel sums on the same scale at M = 0; rho = 0.5 then
/// weighs the two sums equally and rho > 0.5 favours inter-class separation.
/// An unset bandwidth
/// resolves to the median pairwise distance after the PCA initialisation; an
/// unset target dimension resolves to K - 1.
struct SklpConfig {
  double rho = 0.5;
  std::vector<double> class_weights;
  std::optional<double> kernel_bandwidth;
  std::optional<int> target_dim;
  double learning_rate = 0.1;
  int max_iters = 100;
  double rel_tolerance = 1e-6;

  /// Throws std::invalid_argument on out-of-range values.
  void validate(int class_count) const;
};

/// Ordered-pair counts: n_k = c_k (c_k - 1) per class, n_o for inter-class pairs.
struct PairCounts {
  std::vector<double> intra;
  double inter = 0.0;
};

PairCounts pair_counts(std::span<const int> labels, int class_count);

/// Log-mean reparameterisation of the kernel sums:
/// m_k = exp(-(1/n_k) sum_{i,j in k} exp(-M_ij / sigma^2)), and m_o likewise
/// over inter-class pairs. A class with a single sample has no pairs; its
/// m_k is reported as 1 and never enters alpha or the objective.
struct KernelAverages {
  std::vector<double> intra;  // m_k
  double inter = 1.0;         // m_o
};

/// Kernel parameters after defaults have been resolved against a dataset.
struct KernelParams {
  int class_count = 0;
  double rho = 0.5;
  double sigma = 1.0;
  std::vector<double> class_weights;
};

KernelAverages kernel_averages(const Eigen::MatrixXd& distances, std::span<const int> labels, int class_count,
                               double sigma);

/// alpha_ij = -(1 - rho) lambda_k / m_k within class k, rho / m_o across
/// classes, 0 on the diagonal.
Eigen::MatrixXd alpha_weights(const KernelAverages& averages, std::span<const int> labels, const KernelParams& params);

/// Laplacian-style assembly of sum_{i != j} alpha_ij z_ij z_ij^T.
struct ScatterAssembly {
  Eigen::MatrixXd scatter;    // A = X L X^T, D x D
  Eigen::VectorXd degree;     // diagonal of E, E_ii = 2 sum_j alpha_ij
  Eigen::MatrixXd adjacency;  // D_ij = 2 alpha_ij
  Eigen::MatrixXd laplacian;  // L = E - D
};

ScatterAssembly scatter_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& alpha);

/// Unit eigenvectors of the scatter for the min(dim, #eigenvalues above the
/// floor) largest positive eigenvalues, floor = 1e-10 (|A| + 1). Throws
/// NumericalError when no eigenvalue is positive.
ProjectionModel solve_eig(const ScatterAssembly& assembly, int dim);
ProjectionModel solve_eig(const Eigen::MatrixXd& scatter, int dim);

/// J = (1 - rho) sum_k lambda_k sum_{i,j in k} K_ij - rho sum_{i,j not in k} K_ij
/// with K_ij = exp(-M_ij / sigma^2) over ordered pairs i != j.
double objective(const Eigen::MatrixXd& distances, std::span<const int> labels, const KernelParams& params);

/// Damped move of the low-dimensional distances toward those induced by `model`:
/// M' = M + eta (|P^T z_ij|^2 - M).
Eigen::MatrixXd update_distances(const Eigen::MatrixXd& distances, const ProjectionModel& model,
                                 const Eigen::MatrixXd& x, double learning_rate);

struct SklpState {
  KernelParams params;
  int target_dim = 1;
  double learning_rate = 0.1;
  PairCounts pairs;
  Eigen::MatrixXd distances;  // M
  KernelAverages averages;
  Eigen::MatrixXd alpha;
  int iteration = 0;

  double initial_objective = 0.0;
  std::vector<double> objective_history;    // J after each iteration
  std::vector<double> predicted_increment;  // sum(lambda) + ((1-rho) sum lambda_k n_k - rho n_o)
  std::vector<int> selected_dims;           // eigenvectors kept per iteration
  double best_objective = 0.0;
  int best_iteration = 0;  // 1-based index into objective_history
  bool converged = false;
};

/// Resolves defaults, initialises M from the PCA projection and computes the
/// first kernel averages and alpha weights.
SklpState init_state(const LabeledDataset& dataset, const SklpConfig& config);

struct IterationRecord {
  int iteration;
  const ScatterAssembly& assembly;
  const ProjectionModel& model;
  double objective;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

struct SklpFit {
  ProjectionModel model;  // projection with the best observed objective
  SklpState state;
};

SklpFit fit(const LabeledDataset& dataset, const SklpConfig& config, const IterationObserver& observer = {});

}  // namespace sklp
