// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: synthetic data, feature extraction, fitting,
// projection, diffusion embedding, classification and evaluation.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sklp/baselines.hpp"
#include "sklp/classify.hpp"
#include "sklp/dataset.hpp"
#include "sklp/diffusion_map.hpp"
#include "sklp/errors.hpp"
#include "sklp/evaluation.hpp"
#include "sklp/io.hpp"
#include "sklp/silhouette.hpp"
#include "sklp/sklp_projection.hpp"

namespace fs = std::filesystem;
using namespace sklp;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

// Every option shared by the subcommands; each subcommand binds the subset it uses.
struct Options {
  std::string kind;
  // data generation
  int classes = 3, per_class = 50, dim = 10, groups = 0;
  double spread = 1.0, separation = 3.0, noise = 0.1;
  std::uint64_t seed = 0;
  // files
  std::string data, out, model, manifest, train, test, report, confusion_out, model_out, predictions;
  // radon
  int angles = 180;
  std::optional<int> bins;
  std::string label, group;
  // sklp / linear
  std::optional<int> target_dim;
  double rho = SklpConfig{}.rho, eta = SklpConfig{}.learning_rate, tol = SklpConfig{}.rel_tolerance;
  std::optional<double> sigma;
  int max_iters = SklpConfig{}.max_iters;
  // diffusion
  int dm_dim = DiffusionConfig{}.embed_dim, time = 1;
  std::optional<double> dm_sigma;
  bool keep_trivial = false;
  // classification
  std::string pipeline = "sklp+dm", classifier = "knn";
  int k = 1, epochs = SvmConfig{}.epochs;
  double reg = SvmConfig{}.regularization;
  bool vote = false, frame_level = false;
};

SklpConfig sklp_config(const Options& o) {
  SklpConfig c;
  c.rho = o.rho;
  c.learning_rate = o.eta;
  c.rel_tolerance = o.tol;
  c.max_iters = o.max_iters;
  c.kernel_bandwidth = o.sigma;
  c.target_dim = o.target_dim;
  return c;
}

void add_sklp_flags(CLI::App* app, Options& o) {
  app->add_option("--rho", o.rho, "inter/intra balance in (0,1)")->capture_default_str();
  app->add_option("--eta", o.eta, "distance update learning rate in (0,1]")->capture_default_str();
  app->add_option("--sigma", o.sigma, "kernel bandwidth (default: median heuristic)");
  app->add_option("--tol", o.tol, "relative objective tolerance")->capture_default_str();
  app->add_option("--max-iters", o.max_iters, "iteration cap")->capture_default_str();
}

std::string write_output(const std::string& path, const std::string& content, Manifest& m) {
  io::write_atomic(path, content);
  m.outputs.push_back(path);
  return path;
}

std::string dataset_embedding_csv(const LabeledDataset& ds, const Eigen::MatrixXd& y) {
  // same layout as the dataset CSV so outputs chain into other subcommands
  LabeledDataset out = ds;
  out.features = y;
  std::string text = format_csv(out);
  // rename feature columns f0.. -> c1..
  const auto eol = text.find('\n');
  std::string header = "label";
  if (ds.groups) header += ",group";
  for (Eigen::Index c = 0; c < y.rows(); ++c) header += ",c" + std::to_string(c + 1);
  return header + text.substr(eol);
}

struct ManifestEntry {
  std::string path;
  std::string label;
  std::string group;
};

std::vector<ManifestEntry> read_frame_manifest(const std::string& path, const Options& o) {
  const std::string text = io::read_file(path);
  std::vector<std::string_view> lines;
  for (auto l : io::split(text, '\n')) {
    if (!io::trim(l).empty()) lines.push_back(io::trim(l));
  }
  if (lines.empty()) throw DataError(path + ": empty manifest");
  std::vector<ManifestEntry> out;
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](std::string_view p) {
    fs::path fp{std::string(p)};
    return (fp.is_relative() ? base / fp : fp).string();
  };
  const auto header = io::split(lines[0], ',');
  if (io::trim(header[0]) == "path") {
    int label_col = -1, group_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (io::trim(header[c]) == "label") label_col = static_cast<int>(c);
      if (io::trim(header[c]) == "group") group_col = static_cast<int>(c);
    }
    if (label_col < 0 && o.label.empty()) throw DataError(path + ": manifest has no label column and --label is unset");
    for (std::size_t r = 1; r < lines.size(); ++r) {
      const auto cells = io::split(lines[r], ',');
      if (cells.size() != header.size()) throw DataError(path + ": row " + std::to_string(r) + " is ragged");
      out.push_back({resolve(io::trim(cells[0])),
                     label_col >= 0 ? std::string(io::trim(cells[static_cast<std::size_t>(label_col)])) : o.label,
                     group_col >= 0 ? std::string(io::trim(cells[static_cast<std::size_t>(group_col)])) : o.group});
    }
  } else {
    if (o.label.empty()) throw CLI::ValidationError("--label", "a plain frame list needs --label");
    for (auto l : lines) out.push_back({resolve(l), o.label, o.group});
  }
  return out;
}

int cmd_synth(const Options& o, Manifest& m) {
  m.seed = o.seed;
  const LabeledDataset ds =
      o.kind == "gaussian"
          ? gen_gaussian_classes(o.classes, o.per_class, o.dim, o.spread, o.separation, o.seed, o.groups)
          : gen_ring_classes(o.classes, o.per_class, o.noise, o.dim, o.seed, o.groups);
  write_output(o.out, format_csv(ds), m);
  return kOk;
}

int cmd_radon(const Options& o, Manifest& m) {
  m.inputs.push_back(o.manifest);
  const auto entries = read_frame_manifest(o.manifest, o);
  RadonConfig cfg;
  cfg.angle_bins = o.angles;
  cfg.displacement_bins = o.bins;
  std::vector<fs::path> frames;
  for (const auto& e : entries) frames.emplace_back(e.path);
  const Eigen::MatrixXd features = sequence_features(frames, cfg);

  const bool with_groups = std::any_of(entries.begin(), entries.end(), [](const auto& e) { return !e.group.empty(); });
  std::ostringstream out;
  out << "label";
  if (with_groups) out << ",group";
  for (int a = 0; a < cfg.angle_bins; ++a) out << ",r" << a;
  out << '\n';
  for (std::size_t f = 0; f < entries.size(); ++f) {
    out << entries[f].label;
    if (with_groups) out << ',' << entries[f].group;
    for (int a = 0; a < cfg.angle_bins; ++a) out << ',' << io::format_double(features(a, static_cast<Eigen::Index>(f)));
    out << '\n';
  }
  write_output(o.out, out.str(), m);
  return kOk;
}

int cmd_fit(const Options& o, Manifest& m) {
  m.inputs.push_back(o.data);
  const LabeledDataset ds = load_csv(o.data);
  ProjectionModel model;
  if (o.kind == "sklp") {
    model = sklp::fit(ds, sklp_config(o)).model;
  } else if (o.kind == "pca") {
    const int cap = static_cast<int>(std::min<Eigen::Index>(ds.dim(), ds.size() - 1));
    model = pca_fit(ds.features, o.target_dim.value_or(std::min(std::max(ds.class_count - 1, 1), cap)));
  } else {
    model = lda_fit(ds, o.target_dim.value_or(ds.class_count - 1));
  }
  write_output(o.out, to_json(model).dump(2) + "\n", m);
  return kOk;
}

int cmd_project(const Options& o, Manifest& m) {
  m.inputs = {o.model, o.data};
  const ProjectionModel model = load_model(o.model);
  const LabeledDataset ds = load_csv(o.data);
  write_output(o.out, dataset_embedding_csv(ds, apply_model(model, ds.features)), m);
  return kOk;
}

int cmd_diffuse(const Options& o, Manifest& m) {
  m.inputs.push_back(o.data);
  const LabeledDataset ds = load_csv(o.data);
  DiffusionConfig cfg;
  cfg.embed_dim = o.dm_dim;
  cfg.bandwidth = o.dm_sigma;
  cfg.time = o.time;
  cfg.drop_trivial = !o.keep_trivial;
  const DiffusionModel model = diffusion_fit(ds.features, cfg);
  std::vector<std::string> labels;
  for (int l : ds.labels) labels.push_back(ds.class_names[static_cast<std::size_t>(l)]);
  write_output(o.out, format_embedding_csv(model.embedding, labels), m);
  write_output(o.model_out.empty() ? o.out + ".model.json" : o.model_out, to_json(model).dump(2) + "\n", m);
  return kOk;
}

int cmd_classify(const Options& o, Manifest& m) {
  m.inputs = {o.train, o.test};
  m.seed = o.seed;
  const LabeledDataset train = load_csv(o.train);
  const LabeledDataset test = load_csv(o.test);
  // map test label names onto the training ids
  std::vector<int> truth;
  for (int l : test.labels) {
    const auto& name = test.class_names[static_cast<std::size_t>(l)];
    const auto it = std::find(train.class_names.begin(), train.class_names.end(), name);
    if (it == train.class_names.end()) throw DataError("test label '" + name + "' does not occur in training data");
    truth.push_back(static_cast<int>(it - train.class_names.begin()));
  }
  ClassifierConfig cc;
  cc.kind = classifier_from_string(o.kind);
  cc.knn.k = o.k;
  cc.svm = {o.reg, o.epochs, o.seed};
  const std::vector<int> predicted = classify(train.features, train.labels, train.class_count, test.features, cc);

  ConfusionMatrix frames = confusion(truth, predicted, train.class_count, train.class_names);
  ConfusionMatrix units = frames;
  if (o.vote) {
    if (!test.groups) throw DataError("--vote-by-group needs a group column in the test data");
    std::vector<int> video;
    for (std::size_t i = 0; i < truth.size(); ++i) video.push_back((*test.groups)[i] * train.class_count + truth[i]);
    const GroupVote vote = video_majority_vote(predicted, video);
    std::vector<int> vt;
    for (int v : vote.groups) vt.push_back(v % train.class_count);
    units = confusion(vt, vote.labels, train.class_count, train.class_names);
  }
  std::ostringstream rep;
  rep << "classifier: " << o.kind << '\n';
  rep << "unit: " << (o.vote ? "video (majority vote over frames sharing group and label)" : "frame") << '\n';
  rep << "accuracy: " << accuracy(units) << " (" << units.counts.trace() << "/" << units.total() << ")\n";
  rep << "frame accuracy: " << accuracy(frames) << '\n';
  rep << "\nper-class accuracy:\n";
  const auto pc = units.per_class_accuracy();
  for (std::size_t c = 0; c < pc.size(); ++c) rep << "  " << units.class_names[c] << ": " << pc[c] << '\n';
  rep << "\nconfusion matrix (rows = true, columns = predicted):\n" << format_confusion(units);
  nlohmann::json echo = {{"classifier", o.kind}, {"k", o.k}, {"reg", o.reg}, {"epochs", o.epochs}, {"seed", o.seed},
                         {"vote_by_group", o.vote}};
  rep << "\nconfiguration: " << echo.dump() << '\n';
  write_output(o.report, rep.str(), m);
  if (!o.predictions.empty()) {
    std::ostringstream p;
    p << "index,true,predicted\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      p << i << ',' << train.class_names[static_cast<std::size_t>(truth[i])] << ','
        << train.class_names[static_cast<std::size_t>(predicted[i])] << '\n';
    }
    write_output(o.predictions, p.str(), m);
  }
  return kOk;
}

int cmd_evaluate(const Options& o, Manifest& m) {
  m.inputs.push_back(o.data);
  m.seed = o.seed;
  const LabeledDataset ds = load_csv(o.data);
  PipelineConfig cfg;
  cfg.pipeline = pipeline_from_string(o.pipeline);
  cfg.dim = o.target_dim;
  cfg.sklp = sklp_config(o);
  cfg.diffusion.embed_dim = o.dm_dim;
  cfg.diffusion.bandwidth = o.dm_sigma;
  cfg.diffusion.time = o.time;
  cfg.diffusion.drop_trivial = !o.keep_trivial;
  cfg.classifier.kind = classifier_from_string(o.classifier);
  cfg.classifier.knn.k = o.k;
  cfg.classifier.svm = {o.reg, o.epochs, o.seed};
  cfg.vote_by_video = !o.frame_level;
  const CvResult result = cross_validate_actions(ds, cfg);
  write_output(o.report, format_report(result, cfg), m);
  if (!o.confusion_out.empty()) write_output(o.confusion_out, format_confusion_csv(result.confusion), m);
  return kOk;
}

int cmd_trace(const Options& o, Manifest& m) {
  m.inputs.push_back(o.data);
  const LabeledDataset ds = load_csv(o.data);
  const SklpFit f = sklp::fit(ds, sklp_config(o));
  const auto& st = f.state;
  std::ostringstream out;
  out << "iteration,objective,predicted_increment,selected_dims,best\n";
  out << "0," << io::format_double(st.initial_objective) << ",,,0\n";
  for (std::size_t t = 0; t < st.objective_history.size(); ++t) {
    out << (t + 1) << ',' << io::format_double(st.objective_history[t]) << ','
        << io::format_double(st.predicted_increment[t]) << ',' << st.selected_dims[t] << ','
        << (static_cast<int>(t + 1) == st.best_iteration ? 1 : 0) << '\n';
  }
  write_output(o.out, out.str(), m);
  return kOk;
}

void write_manifest(const Manifest& m, double seconds) {
  if (m.outputs.empty()) return;
  nlohmann::json doc = {{"command", m.command},    {"args", m.args},       {"seed", m.seed},
                        {"inputs", m.inputs},      {"outputs", m.outputs}, {"tool", "sklp"},
                        {"version", kVersion},     {"duration_seconds", seconds}};
  io::write_atomic(m.outputs.front() + ".manifest.json", doc.dump(2) + "\n");
}

int run(std::vector<std::string> args);

int cmd_replay(const std::string& manifest_path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path + ": " + e.what());
  }
  return run(doc.at("args").get<std::vector<std::string>>());
}

int run(std::vector<std::string> args) {
  CLI::App app{"Supervised kernel linear projection, diffusion maps and evaluation tools", "sklp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "generate a synthetic labelled dataset");
  synth->add_option("kind", o.kind, "gaussian | rings")->required()->check(CLI::IsMember({"gaussian", "rings"}));
  synth->add_option("--classes", o.classes)->capture_default_str();
  synth->add_option("--per-class", o.per_class)->capture_default_str();
  synth->add_option("--dim", o.dim, "ambient dimension")->capture_default_str();
  synth->add_option("--spread", o.spread, "gaussian standard deviation")->capture_default_str();
  synth->add_option("--separation", o.separation, "minimum distance between gaussian means")->capture_default_str();
  synth->add_option("--noise", o.noise, "ring noise standard deviation")->capture_default_str();
  synth->add_option("--groups", o.groups, "number of group ids assigned round-robin (0: none)")->capture_default_str();
  synth->add_option("--seed", o.seed)->capture_default_str();
  synth->add_option("--out", o.out, "output CSV")->required();

  auto* radon_cmd = app.add_subcommand("radon", "R-transform features from PGM silhouette frames");
  radon_cmd->add_option("--manifest", o.manifest, "CSV with path,label,group or a plain list of frame paths")->required();
  radon_cmd->add_option("--angles", o.angles)->capture_default_str();
  radon_cmd->add_option("--bins", o.bins, "displacement bins (default: image diagonal, odd)");
  radon_cmd->add_option("--label", o.label, "label for a plain frame list");
  radon_cmd->add_option("--group", o.group, "group for a plain frame list");
  radon_cmd->add_option("--out", o.out, "output CSV")->required();

  auto* fit_cmd = app.add_subcommand("fit", "fit a projection model");
  fit_cmd->add_option("kind", o.kind, "sklp | pca | lda")->required()->check(CLI::IsMember({"sklp", "pca", "lda"}));
  fit_cmd->add_option("--data", o.data)->required();
  fit_cmd->add_option("--dim", o.target_dim, "target dimension (default: K-1)");
  add_sklp_flags(fit_cmd, o);
  fit_cmd->add_option("--out", o.out, "output model (JSON)")->required();

  auto* project_cmd = app.add_subcommand("project", "apply a projection model to a dataset");
  project_cmd->add_option("--model", o.model)->required();
  project_cmd->add_option("--data", o.data)->required();
  project_cmd->add_option("--out", o.out)->required();

  auto* diffuse = app.add_subcommand("diffuse", "diffusion map embedding");
  diffuse->add_option("--data", o.data)->required();
  diffuse->add_option("--dim", o.dm_dim, "embedding dimension")->capture_default_str();
  diffuse->add_option("--sigma", o.dm_sigma, "bandwidth (default: median pairwise distance)");
  diffuse->add_option("--time", o.time)->capture_default_str();
  diffuse->add_flag("--keep-trivial", o.keep_trivial, "keep the constant eigenvector");
  diffuse->add_option("--out", o.out, "embedding CSV")->required();
  diffuse->add_option("--model-out", o.model_out, "model JSON (default: <out>.model.json)");

  auto* classify_cmd = app.add_subcommand("classify", "train a classifier and score a test set");
  classify_cmd->add_option("kind", o.kind, "knn | svm")->required()->check(CLI::IsMember({"knn", "svm"}));
  classify_cmd->add_option("--train", o.train)->required();
  classify_cmd->add_option("--test", o.test)->required();
  classify_cmd->add_option("--k", o.k)->capture_default_str();
  classify_cmd->add_option("--reg", o.reg)->capture_default_str();
  classify_cmd->add_option("--epochs", o.epochs)->capture_default_str();
  classify_cmd->add_option("--seed", o.seed)->capture_default_str();
  classify_cmd->add_flag("--vote-by-group", o.vote, "majority vote over frames sharing group and label");
  classify_cmd->add_option("--report", o.report)->required();
  classify_cmd->add_option("--predictions", o.predictions, "optional per-sample prediction CSV");

  auto* evaluate = app.add_subcommand("evaluate", "leave-one-group-out evaluation");
  evaluate->add_option("--data", o.data)->required();
  evaluate->add_option("--pipeline", o.pipeline)
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "pca", "lda", "sklp", "dm", "sklp+dm"}));
  evaluate->add_option("--classifier", o.classifier)->capture_default_str()->check(CLI::IsMember({"knn", "svm"}));
  evaluate->add_option("--dim", o.target_dim, "linear projection dimension (default: K-1)");
  add_sklp_flags(evaluate, o);
  evaluate->add_option("--dm-dim", o.dm_dim)->capture_default_str();
  evaluate->add_option("--dm-sigma", o.dm_sigma, "diffusion bandwidth (default: median heuristic)");
  evaluate->add_option("--time", o.time)->capture_default_str();
  evaluate->add_flag("--keep-trivial", o.keep_trivial);
  evaluate->add_option("--k", o.k)->capture_default_str();
  evaluate->add_option("--reg", o.reg)->capture_default_str();
  evaluate->add_option("--epochs", o.epochs)->capture_default_str();
  evaluate->add_option("--seed", o.seed)->capture_default_str();
  evaluate->add_flag("--frame-level", o.frame_level, "score frames instead of voting per video");
  evaluate->add_option("--report", o.report)->required();
  evaluate->add_option("--confusion", o.confusion_out, "confusion matrix CSV");

  auto* trace = app.add_subcommand("trace", "per-iteration objective history of an sklp fit");
  trace->add_option("--data", o.data)->required();
  trace->add_option("--dim", o.target_dim);
  add_sklp_flags(trace, o);
  trace->add_option("--out", o.out)->required();

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (replay->parsed()) return cmd_replay(replay_path);

  Manifest m;
  m.args = args;
  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  CLI::App* sub = app.get_subcommands().front();
  m.command = sub->get_name();
  if (sub == synth) code = cmd_synth(o, m);
  else if (sub == radon_cmd) code = cmd_radon(o, m);
  else if (sub == fit_cmd) code = cmd_fit(o, m);
  else if (sub == project_cmd) code = cmd_project(o, m);
  else if (sub == diffuse) code = cmd_diffuse(o, m);
  else if (sub == classify_cmd) code = cmd_classify(o, m);
  else if (sub == evaluate) code = cmd_evaluate(o, m);
  else if (sub == trace) code = cmd_trace(o, m);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(m, seconds);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.get_name() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}
