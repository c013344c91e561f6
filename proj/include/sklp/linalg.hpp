// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace sklp::linalg {

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns are unit eigenvectors
};

/// Dense symmetric eigendecomposition. Each eigenvector is oriented so that
/// its largest-magnitude entry is positive (ties go to the lowest index).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a);

/// Flips the sign of `v` in place so its largest-magnitude entry is positive.
void orient(Eigen::Ref<Eigen::VectorXd> v);

/// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
double symmetric_norm(const Eigen::MatrixXd& a);

/// Squared Euclidean distances between all columns of `x` (n x n).
Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& x);

/// Squared Euclidean distances from each column of `y` to each column of `x`
/// (y.cols() x x.cols()).
Eigen::MatrixXd cross_sq_distances(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x);

/// Median of the values; averages the two middle elements for even counts.
double median(std::vector<double> values);

/// Median of sqrt(d(i,j)) over i < j for a squared-distance matrix.
double median_pairwise_distance(const Eigen::MatrixXd& sq_dist);

}  // namespace sklp::linalg
