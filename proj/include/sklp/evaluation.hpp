// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sklp/classify.hpp"
#include "sklp/dataset.hpp"
#include "sklp/diffusion_map.hpp"
#include "sklp/sklp_projection.hpp"

namespace sklp {

/// Dimensionality reduction applied before classification. `dm` and
/// `sklp_dm` share the same DiffusionConfig.
enum class Pipeline { none, pca, lda, sklp, dm, sklp_dm };

std::string to_string(Pipeline pipeline);
Pipeline pipeline_from_string(const std::string& name);  // "sklp+dm" names sklp_dm

enum class ClassifierKind { knn, svm };

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_from_string(const std::string& name);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::knn;
  KnnConfig knn;
  SvmConfig svm;
};

struct PipelineConfig {
  Pipeline pipeline = Pipeline::sklp_dm;
  std::optional<int> dim;  // linear projection dimension; unset: K - 1
  SklpConfig sklp;
  DiffusionConfig diffusion;
  ClassifierConfig classifier;
  /// Vote frame predictions per video, a video being the frames that share a
  /// (group, label) pair. Otherwise frames are scored individually.
  bool vote_by_video = true;
};

nlohmann::json to_json(const PipelineConfig& config);

/// Fitted transform from raw features to classifier inputs.
class Embedder {
public:
  static Embedder fit(const LabeledDataset& train, const PipelineConfig& config);

  /// Classifier inputs for the training columns (one sample per column).
  const Eigen::MatrixXd& train_embedding() const { return train_embedding_; }
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;

  const std::optional<SklpFit>& sklp_fit() const { return sklp_fit_; }

private:
  Pipeline pipeline_ = Pipeline::none;
  std::optional<ProjectionModel> linear_;
  std::optional<DiffusionModel> diffusion_;
  std::optional<SklpFit> sklp_fit_;
  Eigen::MatrixXd train_embedding_;
};

/// Predicted labels for the test columns from a classifier trained on `train`.
std::vector<int> classify(const Eigen::MatrixXd& train, std::span<const int> train_labels, int class_count,
                          const Eigen::MatrixXd& test, const ClassifierConfig& config);

struct FoldResult {
  std::string test_group;
  int frames = 0;
  int units = 0;  // videos (or frames without voting)
  double accuracy = 0.0;
  double frame_accuracy = 0.0;
};

struct SklpFitSummary {
  std::vector<double> objective_history;
  std::vector<double> predicted_increment;
  double initial_objective = 0.0;
  double best_objective = 0.0;
  int best_iteration = 0;
};

struct CvResult {
  ConfusionMatrix confusion;        // per video (or per frame without voting)
  ConfusionMatrix frame_confusion;  // per frame
  double accuracy = 0.0;
  std::vector<FoldResult> folds;
  std::vector<int> test_visits;     // times each sample was on the test side
  std::vector<SklpFitSummary> sklp_fits;
};

/// Leave-one-group-out evaluation: per fold, fit the pipeline on the training
/// frames, embed the test frames, classify, vote per video and accumulate a
/// single confusion matrix. Throws DataError when a fold's training side
/// lacks a class.
CvResult cross_validate_actions(const LabeledDataset& dataset, const PipelineConfig& config);

std::string format_report(const CvResult& result, const PipelineConfig& config);

}  // namespace sklp
