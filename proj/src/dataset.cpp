// SPDX-License-Identifier: Apache-2.0

#include "sklp/dataset.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <Eigen/QR>

#include "sklp/errors.hpp"
#include "sklp/io.hpp"

namespace sklp {

void LabeledDataset::validate() const {
  if (features.rows() == 0) throw DataError("dataset has no feature dimensions");
  if (features.cols() == 0) throw DataError("dataset has no samples");
  if (static_cast<std::size_t>(features.cols()) != labels.size()) {
    throw DataError("feature column count differs from label count");
  }
  if (groups && groups->size() != labels.size()) throw DataError("group count differs from label count");
  if (class_count <= 0) throw DataError("class count must be positive");
  std::vector<int> seen(static_cast<std::size_t>(class_count), 0);
  for (int l : labels) {
    if (l < 0 || l >= class_count) throw DataError("label " + std::to_string(l) + " out of range");
    seen[static_cast<std::size_t>(l)] = 1;
  }
  for (int k = 0; k < class_count; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) throw DataError("class " + std::to_string(k) + " has no samples");
  }
  if (!features.allFinite()) throw DataError("non-finite feature value");
}

std::vector<int> LabeledDataset::class_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(class_count), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

LabeledDataset LabeledDataset::subset(std::span<const int> indices) const {
  LabeledDataset out;
  out.features = select_columns(features, indices);
  out.labels = select(labels, indices);
  if (groups) out.groups = select(*groups, indices);
  out.class_count = class_count;
  out.class_names = class_names;
  out.group_names = group_names;
  out.validate();
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, std::span<const int> indices) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = x.col(indices[j]);
  return out;
}

std::vector<int> select(std::span<const int> values, std::span<const int> indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(values[static_cast<std::size_t>(i)]);
  return out;
}

namespace {

int intern(std::string_view name, std::unordered_map<std::string, int>& ids, std::vector<std::string>& names) {
  auto [it, inserted] = ids.try_emplace(std::string(name), static_cast<int>(names.size()));
  if (inserted) names.emplace_back(name);
  return it->second;
}

}  // namespace

LabeledDataset parse_csv(const std::string& text) {
  std::vector<std::string_view> lines;
  for (auto line : io::split(text, '\n')) {
    if (!io::trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) throw DataError("empty CSV file");

  const auto header = io::split(lines[0], ',');
  int label_col = -1;
  int group_col = -1;
  std::vector<int> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = io::trim(header[c]);
    if (name == "label") {
      label_col = static_cast<int>(c);
    } else if (name == "group") {
      group_col = static_cast<int>(c);
    } else {
      feature_cols.push_back(static_cast<int>(c));
    }
  }
  if (label_col < 0) throw DataError("CSV header has no 'label' column");

  const std::size_t n = lines.size() - 1;
  if (n == 0) throw DataError("CSV file has a header but no rows");
  LabeledDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(feature_cols.size()), static_cast<Eigen::Index>(n));
  ds.labels.reserve(n);
  if (group_col >= 0) ds.groups.emplace().reserve(n);
  std::unordered_map<std::string, int> label_ids;
  std::unordered_map<std::string, int> group_ids;

  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = io::split(lines[r + 1], ',');
    const std::string where = "row " + std::to_string(r + 1);
    if (cells.size() != header.size()) {
      throw DataError(where + ": expected " + std::to_string(header.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    ds.labels.push_back(intern(io::trim(cells[static_cast<std::size_t>(label_col)]), label_ids, ds.class_names));
    if (group_col >= 0) {
      ds.groups->push_back(intern(io::trim(cells[static_cast<std::size_t>(group_col)]), group_ids, ds.group_names));
    }
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const auto c = static_cast<std::size_t>(feature_cols[f]);
      double v = 0.0;
      if (!io::parse_double(cells[c], v) || !std::isfinite(v)) {
        throw DataError(where + ", column " + std::string(io::trim(header[c])) + ": non-numeric value '" +
                        std::string(io::trim(cells[c])) + "'");
      }
      ds.features(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(r)) = v;
    }
  }
  ds.class_count = static_cast<int>(ds.class_names.size());
  ds.validate();
  return ds;
}

LabeledDataset load_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_csv(const LabeledDataset& dataset) {
  dataset.validate();
  auto class_name = [&](int l) {
    return static_cast<std::size_t>(l) < dataset.class_names.size() ? dataset.class_names[static_cast<std::size_t>(l)]
                                                                     : std::to_string(l);
  };
  auto group_name = [&](int g) {
    return static_cast<std::size_t>(g) < dataset.group_names.size() ? dataset.group_names[static_cast<std::size_t>(g)]
                                                                     : std::to_string(g);
  };
  std::ostringstream out;
  out << "label";
  if (dataset.groups) out << ",group";
  for (Eigen::Index f = 0; f < dataset.dim(); ++f) out << ",f" << f;
  out << '\n';
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    out << class_name(dataset.labels[si]);
    if (dataset.groups) out << ',' << group_name((*dataset.groups)[si]);
    for (Eigen::Index f = 0; f < dataset.dim(); ++f) out << ',' << io::format_double(dataset.features(f, i));
    out << '\n';
  }
  return out.str();
}

void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  io::write_atomic(path, format_csv(dataset));
}

namespace {

// Uniformly distributed orthonormal frame (QR of a Gaussian matrix with the
// sign of R's diagonal folded into Q).
Eigen::MatrixXd random_orthonormal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

void check_generator_args(int classes, int per_class, int dim) {
  if (classes < 1) throw std::invalid_argument("classes must be >= 1");
  if (per_class < 1) throw std::invalid_argument("per_class must be >= 1");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
}

void assign_labels(LabeledDataset& ds, int classes, int per_class, int groups) {
  ds.class_count = classes;
  for (int k = 0; k < classes; ++k) ds.class_names.push_back("c" + std::to_string(k));
  for (int k = 0; k < classes; ++k) {
    for (int i = 0; i < per_class; ++i) ds.labels.push_back(k);
  }
  if (groups > 0) {
    auto& g = ds.groups.emplace();
    for (int k = 0; k < classes; ++k) {
      for (int i = 0; i < per_class; ++i) g.push_back(i % groups);
    }
    for (int i = 0; i < groups; ++i) ds.group_names.push_back("g" + std::to_string(i));
  }
}

}  // namespace

LabeledDataset gen_gaussian_classes(int classes, int per_class, int dim, double spread, double separation,
                                    std::uint64_t seed, int groups) {
  check_generator_args(classes, per_class, dim);
  if (!(spread >= 0.0)) throw std::invalid_argument("spread must be >= 0");
  if (!(separation >= 0.0)) throw std::invalid_argument("separation must be >= 0");
  std::mt19937_64 rng(seed);

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(dim, classes);
  if (classes <= dim) {
    // scaled coordinate axes: |s/sqrt2 (e_i - e_j)| = s
    for (int k = 0; k < classes; ++k) means(k, k) = separation / std::numbers::sqrt2;
  } else {
    // integer lattice with spacing `separation`
    int side = 1;
    while (std::pow(static_cast<double>(side), dim) < classes) ++side;
    for (int k = 0; k < classes; ++k) {
      int code = k;
      for (int c = 0; c < dim; ++c) {
        means(c, k) = separation * (code % side);
        code /= side;
      }
    }
  }
  means = random_orthonormal(dim, rng) * means;

  LabeledDataset ds;
  ds.features.resize(dim, static_cast<Eigen::Index>(classes) * per_class);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Index col = 0;
  for (int k = 0; k < classes; ++k) {
    for (int i = 0; i < per_class; ++i, ++col) {
      for (int c = 0; c < dim; ++c) ds.features(c, col) = means(c, k) + spread * normal(rng);
    }
  }
  assign_labels(ds, classes, per_class, groups);
  return ds;
}

LabeledDataset gen_ring_classes(int classes, int per_class, double noise, int dim, std::uint64_t seed,
                                int groups) {
  check_generator_args(classes, per_class, dim);
  if (classes < 2) throw std::invalid_argument("ring classes must be >= 2");
  if (dim < 3) throw std::invalid_argument("ring ambient dimension must be >= 3");
  if (!(noise >= 0.0)) throw std::invalid_argument("noise must be >= 0");
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd plane = random_orthonormal(dim, rng).leftCols(2);

  LabeledDataset ds;
  ds.features.resize(dim, static_cast<Eigen::Index>(classes) * per_class);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Index col = 0;
  for (int k = 0; k < classes; ++k) {
    const double radius = k + 1.0;
    for (int i = 0; i < per_class; ++i, ++col) {
      const double a = angle(rng);
      ds.features.col(col) = plane * Eigen::Vector2d(radius * std::cos(a), radius * std::sin(a));
      if (noise > 0.0) {
        for (int c = 0; c < dim; ++c) ds.features(c, col) += noise * normal(rng);
      }
    }
  }
  assign_labels(ds, classes, per_class, groups);
  return ds;
}

SplitPlan leave_one_group_out(const LabeledDataset& dataset) {
  if (!dataset.groups) throw DataError("leave-one-group-out requires group ids");
  std::map<int, std::vector<int>> members;
  for (std::size_t i = 0; i < dataset.groups->size(); ++i) members[(*dataset.groups)[i]].push_back(static_cast<int>(i));
  if (members.size() < 2) throw DataError("leave-one-group-out requires at least two distinct groups");

  SplitPlan plan;
  for (const auto& [group, test] : members) {
    Fold fold;
    fold.test = test;
    for (std::size_t i = 0; i < dataset.groups->size(); ++i) {
      if ((*dataset.groups)[i] != group) fold.train.push_back(static_cast<int>(i));
    }
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

}  // namespace sklp
