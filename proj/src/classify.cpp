// SPDX-License-Identifier: Apache-2.0

#include "sklp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "sklp/errors.hpp"

namespace sklp {

std::vector<int> knn_predict(const Eigen::MatrixXd& train, std::span<const int> train_labels,
                             const Eigen::MatrixXd& test, const KnnConfig& config) {
  const Eigen::Index n = train.cols();
  if (n == 0) throw DataError("knn: empty training set");
  if (static_cast<std::size_t>(n) != train_labels.size()) throw DataError("knn: label count != training columns");
  if (config.k < 1 || config.k > n) throw DataError("knn: k must lie in [1, training size]");
  if (test.cols() > 0 && test.rows() != train.rows()) throw DataError("knn: test dimension differs from training");

  const int max_label = *std::max_element(train_labels.begin(), train_labels.end());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<int> votes(static_cast<std::size_t>(max_label) + 1);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(test.cols()));

  for (Eigen::Index t = 0; t < test.cols(); ++t) {
    for (Eigen::Index i = 0; i < n; ++i) dist[static_cast<std::size_t>(i)] = (train.col(i) - test.col(t)).squaredNorm();
    std::iota(order.begin(), order.end(), 0);
    auto closer = [&](int a, int b) {
      const double da = dist[static_cast<std::size_t>(a)];
      const double db = dist[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + config.k, order.end(), closer);

    std::fill(votes.begin(), votes.end(), 0);
    int top = 0;
    for (int r = 0; r < config.k; ++r) {
      top = std::max(top, ++votes[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])])]);
    }
    // first neighbour (in distance order) whose label has the top count
    for (int r = 0; r < config.k; ++r) {
      const int label = train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
      if (votes[static_cast<std::size_t>(label)] == top) {
        out.push_back(label);
        break;
      }
    }
  }
  return out;
}

Eigen::MatrixXd SvmModel::scores(const Eigen::MatrixXd& x) const {
  if (x.rows() != weights.rows()) throw DataError("svm: feature dimension differs from training");
  const Eigen::MatrixXd z = scale.cwiseInverse().asDiagonal() * (x.colwise() - center);
  return (weights.transpose() * z).colwise() + bias;
}

namespace {

// Regularised hinge objective lambda/2 |w|^2 + mean(max(0, 1 - y (w.x + b)))
// with the bias stored as the last entry of `w`.
double hinge_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double lambda) {
  const Eigen::Index dim = z.rows();
  const Eigen::VectorXd margins = (z.transpose() * w.head(dim)).array() + w(dim);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) loss += std::max(0.0, 1.0 - y(i) * margins(i));
  return 0.5 * lambda * w.squaredNorm() + loss / static_cast<double>(y.size());
}

}  // namespace

SvmModel svm_fit(const Eigen::MatrixXd& train, std::span<const int> labels, int class_count, const SvmConfig& config) {
  const Eigen::Index n = train.cols();
  const Eigen::Index dim = train.rows();
  if (n == 0) throw DataError("svm: empty training set");
  if (static_cast<std::size_t>(n) != labels.size()) throw DataError("svm: label count != training columns");
  if (class_count < 2) throw DataError("svm: needs at least two classes");
  if (!(config.regularization > 0.0) || config.epochs < 1) throw std::invalid_argument("svm: invalid configuration");
  {
    std::vector<int> seen(static_cast<std::size_t>(class_count), 0);
    for (int l : labels) {
      if (l < 0 || l >= class_count) throw DataError("svm: label out of range");
      seen[static_cast<std::size_t>(l)] = 1;
    }
    if (std::count(seen.begin(), seen.end(), 1) < 2) throw DataError("svm: training data has a single class");
  }

  SvmModel model;
  model.center = train.rowwise().mean();
  const Eigen::MatrixXd centered = train.colwise() - model.center;
  model.scale = (centered.array().square().rowwise().sum() / static_cast<double>(n)).sqrt().matrix();
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (!(model.scale(r) > 0.0)) model.scale(r) = 1.0;
  }
  const Eigen::MatrixXd z = model.scale.cwiseInverse().asDiagonal() * centered;

  // Sample order is drawn once and shared by every class so that relabelling
  // classes permutes the trained classifiers exactly.
  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<int>> epoch_order(static_cast<std::size_t>(config.epochs));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (auto& e : epoch_order) {
    std::shuffle(order.begin(), order.end(), rng);
    e = order;
  }

  const double lambda = config.regularization;
  model.weights = Eigen::MatrixXd::Zero(dim, class_count);
  model.bias = Eigen::VectorXd::Zero(class_count);
  model.epoch_objective.resize(config.epochs, class_count);
  model.best_objective.resize(config.epochs, class_count);

  for (int c = 0; c < class_count; ++c) {
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;

    // bias enters as a constant unit feature, regularised with the weights
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim + 1);
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_w = w;
    long step = 0;
    for (int e = 0; e < config.epochs; ++e) {
      Eigen::VectorXd avg_w = Eigen::VectorXd::Zero(dim + 1);
      for (int i : epoch_order[static_cast<std::size_t>(e)]) {
        ++step;
        const double eta = 1.0 / (lambda * static_cast<double>(step));
        const double margin = y(i) * (z.col(i).dot(w.head(dim)) + w(dim));
        w *= (1.0 - eta * lambda);
        if (margin < 1.0) {
          w.head(dim) += eta * y(i) * z.col(i);
          w(dim) += eta * y(i);
        }
        avg_w += w;
      }
      avg_w /= static_cast<double>(n);
      const double obj = hinge_objective(z, y, avg_w, lambda);
      model.epoch_objective(e, c) = obj;
      if (obj < best) {
        best = obj;
        best_w = avg_w;
      }
      model.best_objective(e, c) = best;
    }
    model.weights.col(c) = best_w.head(dim);
    model.bias(c) = best_w(dim);
  }
  return model;
}

std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& test) {
  std::vector<int> out;
  if (test.cols() == 0) return out;
  const Eigen::MatrixXd s = model.scores(test);
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.rows(); ++c) {
      if (s(c, i) > s(best, i)) best = c;
    }
    out.push_back(static_cast<int>(best));
  }
  return out;
}

GroupVote video_majority_vote(std::span<const int> frame_labels, std::span<const int> frame_groups) {
  if (frame_labels.empty()) throw DataError("majority vote over no frames");
  if (frame_labels.size() != frame_groups.size()) throw DataError("frame label and group counts differ");

  struct Tally {
    std::map<int, int> counts;
    std::map<int, std::size_t> first_seen;
  };
  std::vector<int> group_order;
  std::map<int, Tally> tallies;
  for (std::size_t f = 0; f < frame_labels.size(); ++f) {
    auto [it, inserted] = tallies.try_emplace(frame_groups[f]);
    if (inserted) group_order.push_back(frame_groups[f]);
    ++it->second.counts[frame_labels[f]];
    it->second.first_seen.try_emplace(frame_labels[f], f);
  }

  GroupVote out;
  for (int g : group_order) {
    const Tally& tally = tallies.at(g);
    int best_label = 0;
    int best_count = -1;
    std::size_t best_first = 0;
    for (const auto& [label, count] : tally.counts) {
      const std::size_t first = tally.first_seen.at(label);
      if (count > best_count || (count == best_count && first < best_first)) {
        best_label = label;
        best_count = count;
        best_first = first;
      }
    }
    out.groups.push_back(g);
    out.labels.push_back(best_label);
  }
  return out;
}

std::vector<double> ConfusionMatrix::per_class_accuracy() const {
  std::vector<double> out;
  for (Eigen::Index k = 0; k < counts.rows(); ++k) {
    const int row = counts.row(k).sum();
    out.push_back(row > 0 ? static_cast<double>(counts(k, k)) / row : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.counts.rows() != counts.rows()) throw DataError("confusion matrices of different size");
  counts += other.counts;
  return *this;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int class_count,
                          std::vector<std::string> class_names) {
  if (truth.size() != predicted.size()) throw DataError("confusion: label sequences differ in length");
  if (class_count < 1) throw DataError("confusion: class count must be positive");
  ConfusionMatrix cm;
  cm.counts = Eigen::MatrixXi::Zero(class_count, class_count);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= class_count || predicted[i] < 0 || predicted[i] >= class_count) {
      throw DataError("confusion: label out of range");
    }
    ++cm.counts(truth[i], predicted[i]);
  }
  if (class_names.empty()) {
    for (int k = 0; k < class_count; ++k) class_names.push_back(std::to_string(k));
  }
  cm.class_names = std::move(class_names);
  return cm;
}

double accuracy(const ConfusionMatrix& confusion) {
  const int total = confusion.total();
  if (total <= 0) throw DataError("accuracy of an empty confusion matrix");
  return static_cast<double>(confusion.counts.trace()) / total;
}

std::string format_confusion(const ConfusionMatrix& confusion) {
  std::size_t width = 5;
  for (const auto& name : confusion.class_names) width = std::max(width, name.size() + 1);
  std::ostringstream out;
  out << std::setw(static_cast<int>(width)) << "true\\pred";
  for (const auto& name : confusion.class_names) out << std::setw(static_cast<int>(width)) << name;
  out << '\n';
  for (Eigen::Index r = 0; r < confusion.counts.rows(); ++r) {
    out << std::setw(static_cast<int>(width)) << confusion.class_names[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < confusion.counts.cols(); ++c) {
      out << std::setw(static_cast<int>(width)) << confusion.counts(r, c);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_confusion_csv(const ConfusionMatrix& confusion) {
  std::ostringstream out;
  out << "true";
  for (const auto& name : confusion.class_names) out << ',' << name;
  out << '\n';
  for (Eigen::Index r = 0; r < confusion.counts.rows(); ++r) {
    out << confusion.class_names[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < confusion.counts.cols(); ++c) out << ',' << confusion.counts(r, c);
    out << '\n';
  }
  return out.str();
}

}  // namespace sklp
