// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

namespace sklp {

enum class ProjectionKind { sklp, pca, lda };

std::string to_string(ProjectionKind kind);
ProjectionKind projection_kind_from_string(const std::string& name);

/// A fitted linear map x -> P^T (x - mean). Columns of `matrix` are the
/// projection directions, orthonormal for sklp and pca, unit-norm for lda.
struct ProjectionModel {
  ProjectionKind kind = ProjectionKind::sklp;
  Eigen::MatrixXd matrix;        // dim_in x dim_out
  Eigen::VectorXd eigenvalues;   // descending, one per column
  std::optional<Eigen::VectorXd> mean;
  nlohmann::json config = nlohmann::json::object();  // hyperparameter echo

  Eigen::Index dim_in() const { return matrix.rows(); }
  Eigen::Index dim_out() const { return matrix.cols(); }
};

/// Applies the model to the columns of `x` (dim_in x n) -> dim_out x n.
/// Throws DataError on a dimension mismatch.
Eigen::MatrixXd project(const ProjectionModel& model, const Eigen::MatrixXd& x);

nlohmann::json to_json(const ProjectionModel& model);
ProjectionModel model_from_json(const nlohmann::json& doc);

void save_model(const ProjectionModel& model, const std::filesystem::path& path);
ProjectionModel load_model(const std::filesystem::path& path);

}  // namespace sklp
