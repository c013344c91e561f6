// SPDX-License-Identifier: Apache-2.0

#include "sklp/baselines.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "sklp/errors.hpp"
#include "sklp/linalg.hpp"

namespace sklp {

ProjectionModel pca_fit(const Eigen::MatrixXd& x, int dim) {
  const Eigen::Index n = x.cols();
  if (n < 2) throw DataError("pca needs at least two samples");
  if (dim < 1 || dim > std::min<Eigen::Index>(x.rows(), n - 1)) {
    throw DataError("pca dimension " + std::to_string(dim) + " outside [1, min(D, n-1)]");
  }
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(n - 1);
  const auto eig = linalg::symmetric_eigen(cov);

  ProjectionModel model;
  model.kind = ProjectionKind::pca;
  model.matrix = eig.vectors.leftCols(dim);
  model.eigenvalues = eig.values.head(dim).cwiseMax(0.0);
  model.mean = mean;
  model.config = {{"dim", dim}};
  return model;
}

ProjectionModel lda_fit(const LabeledDataset& dataset, int dim) {
  dataset.validate();
  const int k_count = dataset.class_count;
  if (k_count < 2) throw DataError("lda needs at least two classes (K >= 2)");
  if (dim < 1 || dim > k_count - 1) {
    throw DataError("lda dimension " + std::to_string(dim) + " outside [1, K-1]");
  }
  const Eigen::Index d_in = dataset.dim();
  const Eigen::VectorXd mean = dataset.features.rowwise().mean();
  Eigen::MatrixXd class_means = Eigen::MatrixXd::Zero(d_in, k_count);
  const auto sizes = dataset.class_sizes();
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    class_means.col(dataset.labels[static_cast<std::size_t>(i)]) += dataset.features.col(i);
  }
  for (int k = 0; k < k_count; ++k) class_means.col(k) /= sizes[static_cast<std::size_t>(k)];

  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(d_in, d_in);
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    const Eigen::VectorXd r = dataset.features.col(i) - class_means.col(dataset.labels[static_cast<std::size_t>(i)]);
    within.noalias() += r * r.transpose();
  }
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(d_in, d_in);
  for (int k = 0; k < k_count; ++k) {
    const Eigen::VectorXd r = class_means.col(k) - mean;
    between.noalias() += sizes[static_cast<std::size_t>(k)] * r * r.transpose();
  }

  double ridge = 1e-6 * within.trace() / static_cast<double>(d_in);
  // S_w = 0 (one point per class): fall back to a ridge scaled by S_b so the
  // system stays definite; the solution is then the top eigenvectors of S_b.
  if (!(ridge > 0.0)) ridge = 1e-6 * between.trace() / static_cast<double>(d_in);
  if (!(ridge > 0.0)) throw NumericalError("lda system is singular after regularization");
  const Eigen::MatrixXd regularized = within + ridge * Eigen::MatrixXd::Identity(d_in, d_in);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between, regularized);
  if (solver.info() != Eigen::Success) throw NumericalError("lda generalized eigensolver failed");

  ProjectionModel model;
  model.kind = ProjectionKind::lda;
  model.matrix.resize(d_in, dim);
  model.eigenvalues.resize(dim);
  for (int j = 0; j < dim; ++j) {
    const Eigen::Index src = d_in - 1 - j;  // ascending order from the solver
    // Generalized eigenvectors are only S_w-orthogonal; Gram-Schmidt in
    // eigenvalue order keeps each leading subspace and makes P orthonormal.
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    for (int pass = 0; pass < 2; ++pass) {
      for (int p = 0; p < j; ++p) v -= model.matrix.col(p).dot(v) * model.matrix.col(p);
    }
    v.normalize();
    linalg::orient(v);
    model.matrix.col(j) = v;
    model.eigenvalues(j) = std::max(solver.eigenvalues()(src), 0.0);
  }
  model.config = {{"dim", dim}, {"ridge", ridge}};
  return model;
}

}  // namespace sklp
