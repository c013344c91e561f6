// SPDX-License-Identifier: Apache-2.0

#include "sklp/sklp_projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sklp/baselines.hpp"
#include "sklp/errors.hpp"
#include "sklp/linalg.hpp"

namespace sklp {

void SklpConfig::validate(int class_count) const {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!class_weights.empty()) {
    if (static_cast<int>(class_weights.size()) != class_count) {
      throw std::invalid_argument("class_weights needs one entry per class");
    }
    for (double w : class_weights) {
      if (!(w > 0.0)) throw std::invalid_argument("class weights must be positive");
    }
  }
  if (kernel_bandwidth && !(*kernel_bandwidth > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
  if (target_dim && *target_dim < 1) throw std::invalid_argument("target dimension must be positive");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw std::invalid_argument("learning rate must lie in (0, 1]");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (!(rel_tolerance > 0.0)) throw std::invalid_argument("rel_tolerance must be positive");
}

PairCounts pair_counts(std::span<const int> labels, int class_count) {
  std::vector<double> sizes(static_cast<std::size_t>(class_count), 0.0);
  for (int l : labels) sizes[static_cast<std::size_t>(l)] += 1.0;
  PairCounts counts;
  const double n = static_cast<double>(labels.size());
  double intra_total = 0.0;
  for (double c : sizes) {
    counts.intra.push_back(c * (c - 1.0));
    intra_total += c * (c - 1.0);
  }
  counts.inter = n * (n - 1.0) - intra_total;
  return counts;
}

namespace {

struct KernelSums {
  std::vector<double> intra;
  double inter = 0.0;
};

// Sums of exp(-M_ij / sigma^2) over ordered pairs i != j, split by class.
// Fixed loop order keeps the result reproducible.
KernelSums kernel_sums(const Eigen::MatrixXd& distances, std::span<const int> labels, int class_count,
                       double sigma) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n || static_cast<std::size_t>(n) != labels.size()) {
    throw DataError("distance matrix does not match label count");
  }
  const double inv_s2 = 1.0 / (sigma * sigma);
  KernelSums sums{std::vector<double>(static_cast<std::size_t>(class_count), 0.0), 0.0};
  for (Eigen::Index j = 0; j < n; ++j) {
    const int lj = labels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double k = std::exp(-distances(i, j) * inv_s2);
      if (labels[static_cast<std::size_t>(i)] == lj) {
        sums.intra[static_cast<std::size_t>(lj)] += k;
      } else {
        sums.inter += k;
      }
    }
  }
  return sums;
}

std::vector<double> default_class_weights(const PairCounts& pairs) {
  const double k = static_cast<double>(pairs.intra.size());
  std::vector<double> w;
  for (double nk : pairs.intra) w.push_back(nk > 0.0 ? pairs.inter / (k * nk) : 1.0);
  return w;
}

}  // namespace

KernelAverages kernel_averages(const Eigen::MatrixXd& distances, std::span<const int> labels, int class_count,
                               double sigma) {
  if (!(sigma > 0.0)) throw NumericalError("kernel bandwidth must be positive");
  const PairCounts pairs = pair_counts(labels, class_count);
  if (pairs.inter <= 0.0) throw DataError("no inter-class pairs (n_o = 0); need K >= 2");
  const KernelSums sums = kernel_sums(distances, labels, class_count, sigma);

  KernelAverages avg;
  for (int k = 0; k < class_count; ++k) {
    const auto sk = static_cast<std::size_t>(k);
    if (pairs.intra[sk] > 0.0) {
      avg.intra.push_back(std::exp(-sums.intra[sk] / pairs.intra[sk]));
    } else {
      // singleton class: counted as a class but contributes no pairs
      if (std::find(labels.begin(), labels.end(), k) == labels.end()) {
        throw DataError("class " + std::to_string(k) + " has no samples");
      }
      avg.intra.push_back(1.0);
    }
  }
  avg.inter = std::exp(-sums.inter / pairs.inter);
  return avg;
}

Eigen::MatrixXd alpha_weights(const KernelAverages& averages, std::span<const int> labels, const KernelParams& params) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  std::vector<double> intra_alpha;
  for (int k = 0; k < params.class_count; ++k) {
    const auto sk = static_cast<std::size_t>(k);
    intra_alpha.push_back(-(1.0 - params.rho) * params.class_weights[sk] / averages.intra[sk]);
  }
  const double inter_alpha = params.rho / averages.inter;

  Eigen::MatrixXd alpha(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int lj = labels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) {
        alpha(i, j) = 0.0;
      } else if (labels[static_cast<std::size_t>(i)] == lj) {
        alpha(i, j) = intra_alpha[static_cast<std::size_t>(lj)];
      } else {
        alpha(i, j) = inter_alpha;
      }
    }
  }
  return alpha;
}

ScatterAssembly scatter_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& alpha) {
  if (alpha.rows() != x.cols() || alpha.cols() != x.cols()) throw DataError("alpha does not match sample count");
  ScatterAssembly out;
  out.adjacency = 2.0 * alpha;
  out.adjacency.diagonal().setZero();
  out.degree = out.adjacency.rowwise().sum();
  out.laplacian = -out.adjacency;
  out.laplacian.diagonal() = out.degree;
  // L has zero row sums, so X L X^T is translation invariant; centering only
  // reduces cancellation.
  const Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean();
  Eigen::MatrixXd a = centered * out.laplacian * centered.transpose();
  out.scatter = 0.5 * (a + a.transpose());
  return out;
}

ProjectionModel solve_eig(const Eigen::MatrixXd& scatter, int dim) {
  if (dim < 1) throw std::invalid_argument("target dimension must be positive");
  const auto eig = linalg::symmetric_eigen(scatter);
  const double norm = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double floor = 1e-10 * (norm + 1.0);
  int positive = 0;
  while (positive < eig.values.size() && eig.values(positive) > floor) ++positive;
  const int kept = std::min(dim, positive);
  if (kept == 0) {
    throw NumericalError("scatter matrix has no positive eigenvalues (degenerate configuration)");
  }
  ProjectionModel model;
  model.kind = ProjectionKind::sklp;
  model.matrix = eig.vectors.leftCols(kept);
  model.eigenvalues = eig.values.head(kept);
  return model;
}

ProjectionModel solve_eig(const ScatterAssembly& assembly, int dim) { return solve_eig(assembly.scatter, dim); }

double objective(const Eigen::MatrixXd& distances, std::span<const int> labels, const KernelParams& params) {
  const KernelSums sums = kernel_sums(distances, labels, params.class_count, params.sigma);
  const PairCounts pairs = pair_counts(labels, params.class_count);
  const KernelAverages avg = kernel_averages(distances, labels, params.class_count, params.sigma);

  auto check_identity = [](double sum, double count, double m) {
    if (count <= 0.0) return;
    const double rebuilt = -count * std::log(m);
    const double tol = 1e-10 * std::abs(sum) + 4.0 * std::numeric_limits<double>::epsilon() * count;
    if (std::abs(rebuilt - sum) > tol) throw NumericalError("kernel-average identity violated");
  };

  double intra = 0.0;
  for (int k = 0; k < params.class_count; ++k) {
    const auto sk = static_cast<std::size_t>(k);
    check_identity(sums.intra[sk], pairs.intra[sk], avg.intra[sk]);
    intra += params.class_weights[sk] * sums.intra[sk];
  }
  check_identity(sums.inter, pairs.inter, avg.inter);
  return (1.0 - params.rho) * intra - params.rho * sums.inter;
}

Eigen::MatrixXd update_distances(const Eigen::MatrixXd& distances, const ProjectionModel& model,
                                 const Eigen::MatrixXd& x, double learning_rate) {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw std::invalid_argument("learning rate must lie in (0, 1]");
  if (distances.rows() != x.cols() || distances.cols() != x.cols()) {
    throw DataError("distance matrix does not match sample count");
  }
  const Eigen::MatrixXd target = linalg::pairwise_sq_distances(project(model, x));
  const Eigen::Index n = distances.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double old_v = distances(i, j);
      const double new_v = target(i, j);
      double v = learning_rate == 1.0 ? new_v : old_v + learning_rate * (new_v - old_v);
      v = std::clamp(v, std::min(old_v, new_v), std::max(old_v, new_v));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

SklpState init_state(const LabeledDataset& dataset, const SklpConfig& config) {
  dataset.validate();
  const Eigen::Index n = dataset.size();
  const int k_count = dataset.class_count;
  if (k_count < 2) throw NumericalError("sklp needs at least two classes (K >= 2) to form inter-class pairs");
  if (n < 2) throw DataError("sklp needs at least two samples");
  config.validate(k_count);

  SklpState state;
  state.pairs = pair_counts(dataset.labels, k_count);
  if (state.pairs.inter <= 0.0) throw NumericalError("no inter-class pairs (n_o = 0)");

  const int cap = static_cast<int>(std::min<Eigen::Index>(dataset.dim(), n - 1));
  state.target_dim = std::min(config.target_dim.value_or(k_count - 1), cap);
  state.learning_rate = config.learning_rate;

  const ProjectionModel start = pca_fit(dataset.features, state.target_dim);
  // M_ij = |P^T z_ij|^2 is unaffected by the PCA centering.
  state.distances = linalg::pairwise_sq_distances(project(start, dataset.features));

  state.params.class_count = k_count;
  state.params.rho = config.rho;
  state.params.class_weights = config.class_weights.empty() ? default_class_weights(state.pairs) : config.class_weights;
  state.params.sigma = config.kernel_bandwidth ? *config.kernel_bandwidth
                                               : linalg::median_pairwise_distance(state.distances);
  if (!(state.params.sigma > 0.0)) {
    throw NumericalError("kernel bandwidth resolved to 0 (projected points coincide)");
  }

  state.averages = kernel_averages(state.distances, dataset.labels, k_count, state.params.sigma);
  state.alpha = alpha_weights(state.averages, dataset.labels, state.params);
  state.initial_objective = objective(state.distances, dataset.labels, state.params);
  return state;
}

namespace {

nlohmann::json config_echo(const SklpState& state, const SklpConfig& config) {
  return {{"rho", state.params.rho},
          {"class_weights", state.params.class_weights},
          {"kernel_bandwidth", state.params.sigma},
          {"kernel_bandwidth_auto", !config.kernel_bandwidth.has_value()},
          {"target_dim", state.target_dim},
          {"learning_rate", state.learning_rate},
          {"max_iters", config.max_iters},
          {"rel_tolerance", config.rel_tolerance},
          {"iterations", state.iteration},
          {"best_iteration", state.best_iteration},
          {"best_objective", state.best_objective}};
}

}  // namespace

SklpFit fit(const LabeledDataset& dataset, const SklpConfig& config, const IterationObserver& observer) {
  SklpState state = init_state(dataset, config);
  const std::span<const int> labels(dataset.labels);

  double constant_term = -state.params.rho * state.pairs.inter;
  for (int k = 0; k < state.params.class_count; ++k) {
    const auto sk = static_cast<std::size_t>(k);
    constant_term += (1.0 - state.params.rho) * state.params.class_weights[sk] * state.pairs.intra[sk];
  }

  std::optional<ProjectionModel> best;
  double previous = state.initial_objective;
  for (int t = 1; t <= config.max_iters; ++t) {
    if (t > 1) {
      state.averages = kernel_averages(state.distances, labels, state.params.class_count, state.params.sigma);
      state.alpha = alpha_weights(state.averages, labels, state.params);
    }
    const ScatterAssembly assembly = scatter_matrix(dataset.features, state.alpha);
    ProjectionModel model = solve_eig(assembly, state.target_dim);
    state.distances = update_distances(state.distances, model, dataset.features, state.learning_rate);
    const double j = objective(state.distances, labels, state.params);

    state.iteration = t;
    state.objective_history.push_back(j);
    state.predicted_increment.push_back(model.eigenvalues.sum() + constant_term);
    state.selected_dims.push_back(static_cast<int>(model.dim_out()));
    if (observer) observer(IterationRecord{t, assembly, model, j});

    if (!best || j > state.best_objective) {
      state.best_objective = j;
      state.best_iteration = t;
      best = std::move(model);
    }
    if (std::abs(j - previous) <= config.rel_tolerance * (std::abs(previous) + 1.0)) {
      state.converged = true;
      break;
    }
    previous = j;
  }

  SklpFit out{std::move(*best), std::move(state)};
  out.model.config = config_echo(out.state, config);
  return out;
}

}  // namespace sklp
