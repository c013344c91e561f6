// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sklp {

struct KnnConfig {
  int k = 1;  // squared Euclidean distance
};

/// Majority label of the k nearest training columns for each test column.
/// Distance ties go to the lower training index; vote ties to the label of
/// the nearest neighbour among the tied labels.
std::vector<int> knn_predict(const Eigen::MatrixXd& train, std::span<const int> train_labels,
                             const Eigen::MatrixXd& test, const KnnConfig& config);

struct SvmConfig {
  double regularization = 1e-3;
  int epochs = 50;
  std::uint64_t seed = 0;
};

/// One-vs-rest linear classifiers on standardised features.
struct SvmModel {
  Eigen::MatrixXd weights;  // D x K
  Eigen::VectorXd bias;     // K
  Eigen::VectorXd center;   // feature means used for standardisation
  Eigen::VectorXd scale;    // feature standard deviations (1 where constant)
  /// Training objective per epoch and class (epochs x K), evaluated at the
  /// averaged iterate of that epoch.
  Eigen::MatrixXd epoch_objective;
  /// Running minimum of epoch_objective; the returned weights attain the
  /// final row.
  Eigen::MatrixXd best_objective;

  int class_count() const { return static_cast<int>(weights.cols()); }
  Eigen::MatrixXd scores(const Eigen::MatrixXd& x) const;  // K x n
};

/// Hinge-loss subgradient training (Pegasos step 1 / (lambda t), bias as a
/// constant feature) with a seeded
/// sample order shared by every class, iterate averaging per epoch, and
/// best-epoch retention.
SvmModel svm_fit(const Eigen::MatrixXd& train, std::span<const int> labels, int class_count, const SvmConfig& config);

/// argmax of the per-class scores; ties go to the lowest class id.
std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& test);

/// Most frequent frame label per group, groups listed in order of first
/// appearance. Ties go to the tied label that occurs earliest.
struct GroupVote {
  std::vector<int> groups;
  std::vector<int> labels;
};

GroupVote video_majority_vote(std::span<const int> frame_labels, std::span<const int> frame_groups);

struct ConfusionMatrix {
  Eigen::MatrixXi counts;  // rows = true, columns = predicted
  std::vector<std::string> class_names;

  int total() const { return counts.sum(); }
  std::vector<double> per_class_accuracy() const;  // NaN for classes without samples
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int class_count,
                          std::vector<std::string> class_names = {});

/// trace / total; throws DataError when the matrix is empty.
double accuracy(const ConfusionMatrix& confusion);

/// Text table of the counts plus a CSV variant.
std::string format_confusion(const ConfusionMatrix& confusion);
std::string format_confusion_csv(const ConfusionMatrix& confusion);

}  // namespace sklp
