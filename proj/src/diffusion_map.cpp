// SPDX-License-Identifier: Apache-2.0

#include "sklp/diffusion_map.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sklp/errors.hpp"
#include "sklp/io.hpp"
#include "sklp/linalg.hpp"

namespace sklp {

void DiffusionConfig::validate() const {
  if (bandwidth && !(*bandwidth > 0.0)) throw std::invalid_argument("diffusion bandwidth must be positive");
  if (embed_dim < 1) throw std::invalid_argument("diffusion embed_dim must be >= 1");
  if (time < 1) throw std::invalid_argument("diffusion time must be >= 1");
}

Eigen::MatrixXd affinity(const Eigen::MatrixXd& points, double bandwidth) {
  if (!(bandwidth > 0.0)) throw NumericalError("diffusion bandwidth must be positive");
  const double inv = 1.0 / (bandwidth * bandwidth);
  Eigen::MatrixXd w = (-linalg::pairwise_sq_distances(points) * inv).array().exp().matrix();
  w.diagonal().setOnes();
  return w;
}

Eigen::MatrixXd transition(const Eigen::MatrixXd& w) {
  const Eigen::VectorXd sums = w.rowwise().sum();
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    if (!(sums(i) > 0.0)) throw NumericalError("affinity row " + std::to_string(i) + " has zero sum");
  }
  return sums.cwiseInverse().asDiagonal() * w;
}

DiffusionModel diffusion_fit(const Eigen::MatrixXd& points, const DiffusionConfig& config) {
  config.validate();
  const Eigen::Index n = points.cols();
  const int offset = config.drop_trivial ? 1 : 0;
  if (n < config.embed_dim + offset) {
    throw DataError("diffusion map needs at least " + std::to_string(config.embed_dim + offset) + " points, got " +
                    std::to_string(n));
  }

  DiffusionModel model;
  model.train_points = points;
  model.time = config.time;
  model.drop_trivial = config.drop_trivial;
  model.bandwidth = config.bandwidth ? *config.bandwidth
                                     : (n >= 2 ? linalg::median_pairwise_distance(linalg::pairwise_sq_distances(points))
                                               : 1.0);
  if (!(model.bandwidth > 0.0)) throw NumericalError("diffusion bandwidth resolved to 0 (points coincide)");

  const Eigen::MatrixXd w = affinity(points, model.bandwidth);
  model.row_sums = w.rowwise().sum();
  const Eigen::VectorXd inv_sqrt = model.row_sums.cwiseSqrt().cwiseInverse();
  // S = D^{-1/2} W D^{-1/2} shares its spectrum with T; phi = D^{-1/2} psi.
  Eigen::MatrixXd s = inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
  s = 0.5 * (s + s.transpose());
  const auto eig = linalg::symmetric_eigen(s);

  model.eigenvalues = eig.values;
  model.eigenvectors = inv_sqrt.asDiagonal() * eig.vectors;
  for (Eigen::Index l = 0; l < n; ++l) {
    model.eigenvectors.col(l).normalize();
    linalg::orient(model.eigenvectors.col(l));
  }

  model.embedding.resize(n, config.embed_dim);
  for (int l = 0; l < config.embed_dim; ++l) {
    const int src = l + offset;
    model.embedding.col(l) = std::pow(model.eigenvalues(src), config.time) * model.eigenvectors.col(src);
  }
  return model;
}

Eigen::MatrixXd diffusion_extend(const DiffusionModel& model, const Eigen::MatrixXd& points) {
  if (points.cols() > 0 && points.rows() != model.train_points.rows()) {
    throw DataError("diffusion extension expects " + std::to_string(model.train_points.rows()) +
                    " dimensions, got " + std::to_string(points.rows()));
  }
  const Eigen::Index m = points.cols();
  Eigen::MatrixXd out(m, model.embed_dim());
  if (m == 0) return out;
  const double inv = 1.0 / (model.bandwidth * model.bandwidth);
  Eigen::MatrixXd p = (-linalg::cross_sq_distances(points, model.train_points) * inv).array().exp().matrix();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double total = p.row(i).sum();
    if (!(total > 0.0)) throw NumericalError("new point has zero affinity to every training point");
    p.row(i) /= total;
  }
  for (int l = 0; l < model.embed_dim(); ++l) {
    const int src = model.source_index(l);
    const double scale = std::pow(model.eigenvalues(src), model.time - 1);
    out.col(l) = scale * (p * model.eigenvectors.col(src));
  }
  return out;
}

std::string format_embedding_csv(const Eigen::MatrixXd& embedding, std::span<const std::string> labels) {
  const bool with_labels = !labels.empty();
  if (with_labels && static_cast<Eigen::Index>(labels.size()) != embedding.rows()) {
    throw DataError("label count does not match embedding rows");
  }
  std::ostringstream out;
  if (with_labels) out << "label,";
  for (Eigen::Index c = 0; c < embedding.cols(); ++c) out << (c ? "," : "") << 'c' << (c + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
    if (with_labels) out << labels[static_cast<std::size_t>(i)] << ',';
    for (Eigen::Index c = 0; c < embedding.cols(); ++c) {
      out << (c ? "," : "") << io::format_double(embedding(i, c));
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const DiffusionModel& model) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json doc;
  doc["kind"] = "diffusion_map";
  doc["bandwidth"] = model.bandwidth;
  doc["time"] = model.time;
  doc["drop_trivial"] = model.drop_trivial;
  doc["embed_dim"] = model.embed_dim();
  doc["eigenvalues"] = vec(model.eigenvalues.head(model.embed_dim() + (model.drop_trivial ? 1 : 0)));
  doc["row_sums"] = vec(model.row_sums);
  return doc;
}

}  // namespace sklp
