// SPDX-License-Identifier: Apache-2.0

#include "sklp/projection_model.hpp"

#include "sklp/errors.hpp"
#include "sklp/io.hpp"

namespace sklp {

std::string to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::sklp: return "sklp";
    case ProjectionKind::pca: return "pca";
    case ProjectionKind::lda: return "lda";
  }
  return "unknown";
}

ProjectionKind projection_kind_from_string(const std::string& name) {
  if (name == "sklp") return ProjectionKind::sklp;
  if (name == "pca") return ProjectionKind::pca;
  if (name == "lda") return ProjectionKind::lda;
  throw DataError("unknown projection kind '" + name + "'");
}

Eigen::MatrixXd project(const ProjectionModel& model, const Eigen::MatrixXd& x) {
  if (x.rows() != model.dim_in()) {
    throw DataError("projection expects " + std::to_string(model.dim_in()) + " input dimensions, got " +
                    std::to_string(x.rows()));
  }
  if (model.mean) return model.matrix.transpose() * (x.colwise() - *model.mean);
  return model.matrix.transpose() * x;
}

nlohmann::json to_json(const ProjectionModel& model) {
  nlohmann::json doc;
  doc["kind"] = to_string(model.kind);
  doc["dim_in"] = model.dim_in();
  doc["dim_out"] = model.dim_out();
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < model.matrix.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < model.matrix.cols(); ++j) row.push_back(model.matrix(i, j));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  doc["eigenvalues"] = std::vector<double>(model.eigenvalues.data(), model.eigenvalues.data() + model.eigenvalues.size());
  if (model.mean) doc["mean"] = std::vector<double>(model.mean->data(), model.mean->data() + model.mean->size());
  doc["config"] = model.config;
  return doc;
}

ProjectionModel model_from_json(const nlohmann::json& doc) {
  try {
    ProjectionModel model;
    model.kind = projection_kind_from_string(doc.at("kind").get<std::string>());
    const auto dim_in = doc.at("dim_in").get<Eigen::Index>();
    const auto dim_out = doc.at("dim_out").get<Eigen::Index>();
    const auto& rows = doc.at("matrix");
    if (static_cast<Eigen::Index>(rows.size()) != dim_in) throw DataError("model matrix row count != dim_in");
    model.matrix.resize(dim_in, dim_out);
    for (Eigen::Index i = 0; i < dim_in; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != dim_out) throw DataError("model matrix row length != dim_out");
      for (Eigen::Index j = 0; j < dim_out; ++j) model.matrix(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    const auto eig = doc.at("eigenvalues").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(eig.size()) != dim_out) throw DataError("model eigenvalue count != dim_out");
    model.eigenvalues = Eigen::Map<const Eigen::VectorXd>(eig.data(), dim_out);
    if (doc.contains("mean")) {
      const auto mean = doc.at("mean").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(mean.size()) != dim_in) throw DataError("model mean length != dim_in");
      model.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), dim_in);
    }
    if (doc.contains("config")) model.config = doc.at("config");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const ProjectionModel& model, const std::filesystem::path& path) {
  io::write_atomic(path, to_json(model).dump(2) + "\n");
}

ProjectionModel load_model(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace sklp
