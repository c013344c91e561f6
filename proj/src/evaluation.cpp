// SPDX-License-Identifier: Apache-2.0

#include "sklp/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "sklp/baselines.hpp"
#include "sklp/errors.hpp"

namespace sklp {

std::string to_string(Pipeline pipeline) {
  switch (pipeline) {
    case Pipeline::none: return "none";
    case Pipeline::pca: return "pca";
    case Pipeline::lda: return "lda";
    case Pipeline::sklp: return "sklp";
    case Pipeline::dm: return "dm";
    case Pipeline::sklp_dm: return "sklp+dm";
  }
  return "unknown";
}

Pipeline pipeline_from_string(const std::string& name) {
  for (auto p : {Pipeline::none, Pipeline::pca, Pipeline::lda, Pipeline::sklp, Pipeline::dm, Pipeline::sklp_dm}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown pipeline '" + name + "'");
}

std::string to_string(ClassifierKind kind) { return kind == ClassifierKind::knn ? "knn" : "svm"; }

ClassifierKind classifier_from_string(const std::string& name) {
  if (name == "knn") return ClassifierKind::knn;
  if (name == "svm") return ClassifierKind::svm;
  throw std::invalid_argument("unknown classifier '" + name + "'");
}

nlohmann::json to_json(const PipelineConfig& config) {
  nlohmann::json doc;
  doc["pipeline"] = to_string(config.pipeline);
  doc["dim"] = config.dim ? nlohmann::json(*config.dim) : nlohmann::json("auto");
  if (config.pipeline == Pipeline::sklp || config.pipeline == Pipeline::sklp_dm) {
    const auto& s = config.sklp;
    doc["sklp"] = {{"rho", s.rho},
                   {"class_weights", s.class_weights.empty() ? nlohmann::json("auto") : nlohmann::json(s.class_weights)},
                   {"sigma", s.kernel_bandwidth ? nlohmann::json(*s.kernel_bandwidth) : nlohmann::json("auto")},
                   {"eta", s.learning_rate},
                   {"max_iters", s.max_iters},
                   {"tol", s.rel_tolerance}};
  }
  if (config.pipeline == Pipeline::dm || config.pipeline == Pipeline::sklp_dm) {
    const auto& d = config.diffusion;
    doc["diffusion"] = {{"sigma", d.bandwidth ? nlohmann::json(*d.bandwidth) : nlohmann::json("auto")},
                        {"dim", d.embed_dim},
                        {"time", d.time},
                        {"drop_trivial", d.drop_trivial}};
  }
  doc["classifier"] = to_string(config.classifier.kind);
  if (config.classifier.kind == ClassifierKind::knn) {
    doc["k"] = config.classifier.knn.k;
  } else {
    doc["reg"] = config.classifier.svm.regularization;
    doc["epochs"] = config.classifier.svm.epochs;
    doc["seed"] = config.classifier.svm.seed;
  }
  doc["vote_by_video"] = config.vote_by_video;
  return doc;
}

Embedder Embedder::fit(const LabeledDataset& train, const PipelineConfig& config) {
  Embedder e;
  e.pipeline_ = config.pipeline;
  const int k_minus_1 = train.class_count - 1;
  const int linear_cap = static_cast<int>(std::min<Eigen::Index>(train.dim(), train.size() - 1));
  const int dim = std::min(config.dim.value_or(k_minus_1), linear_cap);

  Eigen::MatrixXd features = train.features;
  switch (config.pipeline) {
    case Pipeline::none:
    case Pipeline::dm:
      break;
    case Pipeline::pca:
      e.linear_ = pca_fit(train.features, dim);
      break;
    case Pipeline::lda:
      e.linear_ = lda_fit(train, std::min(dim, k_minus_1));
      break;
    case Pipeline::sklp:
    case Pipeline::sklp_dm: {
      SklpConfig sc = config.sklp;
      sc.target_dim = config.dim ? config.dim : sc.target_dim;
      e.sklp_fit_ = sklp::fit(train, sc);
      e.linear_ = e.sklp_fit_->model;
      break;
    }
  }
  if (e.linear_) features = project(*e.linear_, train.features);
  if (config.pipeline == Pipeline::dm || config.pipeline == Pipeline::sklp_dm) {
    e.diffusion_ = diffusion_fit(features, config.diffusion);
    e.train_embedding_ = e.diffusion_->embedding.transpose();
  } else {
    e.train_embedding_ = std::move(features);
  }
  return e;
}

Eigen::MatrixXd Embedder::transform(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out = linear_ ? project(*linear_, x) : x;
  if (diffusion_) out = diffusion_extend(*diffusion_, out).transpose();
  return out;
}

std::vector<int> classify(const Eigen::MatrixXd& train, std::span<const int> train_labels, int class_count,
                          const Eigen::MatrixXd& test, const ClassifierConfig& config) {
  if (config.kind == ClassifierKind::knn) return knn_predict(train, train_labels, test, config.knn);
  return svm_predict(svm_fit(train, train_labels, class_count, config.svm), test);
}

CvResult cross_validate_actions(const LabeledDataset& dataset, const PipelineConfig& config) {
  dataset.validate();
  const SplitPlan plan = leave_one_group_out(dataset);
  const int k_count = dataset.class_count;

  CvResult result;
  result.confusion = confusion({}, {}, k_count, dataset.class_names);
  result.frame_confusion = result.confusion;
  result.test_visits.assign(static_cast<std::size_t>(dataset.size()), 0);

  for (const Fold& fold : plan.folds) {
    const int group = (*dataset.groups)[static_cast<std::size_t>(fold.test.front())];
    const std::string group_name = static_cast<std::size_t>(group) < dataset.group_names.size()
                                       ? dataset.group_names[static_cast<std::size_t>(group)]
                                       : std::to_string(group);
    LabeledDataset train;
    try {
      train = dataset.subset(fold.train);
    } catch (const DataError& e) {
      throw DataError("fold holding out group '" + group_name + "': training side is missing a class (" + e.what() + ")");
    }
    const Embedder embedder = Embedder::fit(train, config);
    if (embedder.sklp_fit()) {
      const auto& st = embedder.sklp_fit()->state;
      result.sklp_fits.push_back(
          {st.objective_history, st.predicted_increment, st.initial_objective, st.best_objective, st.best_iteration});
    }

    const Eigen::MatrixXd test = embedder.transform(select_columns(dataset.features, fold.test));
    const std::vector<int> truth = select(dataset.labels, fold.test);
    const std::vector<int> predicted =
        classify(embedder.train_embedding(), train.labels, k_count, test, config.classifier);
    for (int i : fold.test) ++result.test_visits[static_cast<std::size_t>(i)];

    const ConfusionMatrix frames = confusion(truth, predicted, k_count, dataset.class_names);
    ConfusionMatrix units = frames;
    if (config.vote_by_video) {
      // a video is the set of frames sharing (group, true label)
      const std::vector<int> groups = select(*dataset.groups, fold.test);
      std::vector<int> video(truth.size());
      for (std::size_t i = 0; i < truth.size(); ++i) video[i] = groups[i] * k_count + truth[i];
      const GroupVote vote = video_majority_vote(predicted, video);
      std::vector<int> video_truth;
      for (int v : vote.groups) video_truth.push_back(v % k_count);
      units = confusion(video_truth, vote.labels, k_count, dataset.class_names);
    }
    result.frame_confusion += frames;
    result.confusion += units;
    result.folds.push_back({group_name, frames.total(), units.total(), accuracy(units), accuracy(frames)});
  }
  result.accuracy = accuracy(result.confusion);
  return result;
}

std::string format_report(const CvResult& result, const PipelineConfig& config) {
  auto pct = [](double v) {
    std::ostringstream s;
    if (std::isnan(v)) {
      s << "n/a";
    } else {
      s << std::fixed << std::setprecision(2) << 100.0 * v << '%';
    }
    return s.str();
  };
  std::ostringstream out;
  out << "protocol: leave-one-group-out (" << result.folds.size() << " folds)\n";
  out << "unit: " << (config.vote_by_video ? "video (majority vote over frames)" : "frame") << '\n';
  out << "overall accuracy: " << pct(result.accuracy) << " (" << result.confusion.counts.trace() << "/"
      << result.confusion.total() << ")\n";
  out << "frame accuracy: " << pct(accuracy(result.frame_confusion)) << " (" << result.frame_confusion.counts.trace()
      << "/" << result.frame_confusion.total() << ")\n";
  out << "\nper-class accuracy:\n";
  const auto per_class = result.confusion.per_class_accuracy();
  for (std::size_t k = 0; k < per_class.size(); ++k) {
    out << "  " << result.confusion.class_names[k] << ": " << pct(per_class[k]) << '\n';
  }
  out << "\nconfusion matrix (rows = true, columns = predicted):\n" << format_confusion(result.confusion);
  out << "\nper-fold accuracy:\n";
  for (const auto& f : result.folds) {
    out << "  group " << f.test_group << ": " << pct(f.accuracy) << " (" << f.units << " units, " << f.frames
        << " frames, frame accuracy " << pct(f.frame_accuracy) << ")\n";
  }
  out << "\nconfiguration: " << to_json(config).dump() << '\n';
  return out.str();
}

}  // namespace sklp
