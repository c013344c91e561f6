// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "sklp/dataset.hpp"
#include "sklp/projection_model.hpp"

namespace sklp {

/// Principal components: top-`dim` eigenvectors of the sample covariance
/// (1/(n-1) normalization). The model stores the mean and centers on apply.
/// Requires n >= 2 and dim <= min(D, n-1).
ProjectionModel pca_fit(const Eigen::MatrixXd& x, int dim);

/// Fisher discriminant directions from S_b v = l (S_w + g I) v with ridge
/// g = 1e-6 trace(S_w) / D (or 1e-6 trace(S_b) / D when S_w vanishes). The
/// returned columns are an orthonormal basis of the leading generalized
/// eigenspaces, built in eigenvalue order. Requires K >= 2 and dim <= K - 1.
ProjectionModel lda_fit(const LabeledDataset& dataset, int dim);

/// Shared application path for every kind of projection model.
inline Eigen::MatrixXd apply_model(const ProjectionModel& model, const Eigen::MatrixXd& x) { return project(model, x); }

}  // namespace sklp
