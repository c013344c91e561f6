// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used only by tests. They avoid the
// library's code paths on purpose: plain loops, std::vector storage, and a
// cyclic Jacobi eigensolver instead of Eigen's tridiagonal QR.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix to_rows(const Eigen::MatrixXd& m) {
  Matrix out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

/// Cyclic Jacobi rotations on a symmetric matrix; returns eigenvalues sorted
/// descending and the matching eigenvectors as columns.
struct JacobiResult {
  std::vector<double> values;
  Matrix vectors;  // vectors[row][col]
};

inline JacobiResult jacobi_eigen(Matrix a) {
  const std::size_t n = a.size();
  Matrix v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  JacobiResult r;
  r.vectors.assign(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    r.values.push_back(a[order[c]][order[c]]);
    for (std::size_t k = 0; k < n; ++k) r.vectors[k][c] = v[k][order[c]];
  }
  return r;
}

inline double sq_dist(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) s += (x(r, i) - x(r, j)) * (x(r, i) - x(r, j));
  return s;
}

/// Ordered-pair kernel sums (per class, inter) by double loop.
struct KernelSums {
  std::vector<double> intra;
  std::vector<double> intra_pairs;
  double inter = 0.0;
  double inter_pairs = 0.0;
};

inline KernelSums kernel_sums(const Eigen::MatrixXd& m, const std::vector<int>& labels, int k, double sigma) {
  KernelSums s{std::vector<double>(static_cast<std::size_t>(k), 0.0), std::vector<double>(static_cast<std::size_t>(k), 0.0)};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (i == j) continue;
      const double v = std::exp(-m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / (sigma * sigma));
      if (labels[i] == labels[j]) {
        s.intra[static_cast<std::size_t>(labels[i])] += v;
        s.intra_pairs[static_cast<std::size_t>(labels[i])] += 1.0;
      } else {
        s.inter += v;
        s.inter_pairs += 1.0;
      }
    }
  }
  return s;
}

/// sum_{i != j} alpha_ij z_ij z_ij^T by explicit outer products.
inline Eigen::MatrixXd pairwise_scatter(const Eigen::MatrixXd& x, const Eigen::MatrixXd& alpha) {
  const Eigen::Index d = x.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (i == j) continue;
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          a(r, c) += alpha(i, j) * (x(r, i) - x(r, j)) * (x(c, i) - x(c, j));
    }
  }
  return a;
}

/// Exhaustive k-NN: full sort of (distance, index) pairs, then a vote where a
/// tie is resolved by scanning neighbours in order.
inline int knn_one(const Eigen::MatrixXd& train, const std::vector<int>& labels, const Eigen::VectorXd& q, int k) {
  std::vector<std::pair<double, int>> d;
  for (Eigen::Index i = 0; i < train.cols(); ++i) {
    double s = 0.0;
    for (Eigen::Index r = 0; r < train.rows(); ++r) s += (train(r, i) - q(r)) * (train(r, i) - q(r));
    d.emplace_back(s, static_cast<int>(i));
  }
  std::sort(d.begin(), d.end());
  std::map<int, int> votes;
  for (int r = 0; r < k; ++r) votes[labels[static_cast<std::size_t>(d[static_cast<std::size_t>(r)].second)]]++;
  int top = 0;
  for (auto& [l, c] : votes) top = std::max(top, c);
  for (int r = 0; r < k; ++r) {
    const int l = labels[static_cast<std::size_t>(d[static_cast<std::size_t>(r)].second)];
    if (votes[l] == top) return l;
  }
  return -1;
}

/// R-transform straight from the definition: pixel loop per angle into
/// nearest bins relative to the foreground bounding-box centre.
inline std::vector<double> r_transform(const std::vector<std::vector<int>>& img, int angles, int bins) {
  const int h = static_cast<int>(img.size()), w = static_cast<int>(img[0].size());
  int i0 = h, i1 = -1, j0 = w, j1 = -1;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      if (img[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        i0 = std::min(i0, i); i1 = std::max(i1, i); j0 = std::min(j0, j); j1 = std::max(j1, j);
      }
  const double half = 0.5 * std::sqrt(double(h) * h + double(w) * w);
  const double step = 2.0 * half / (bins - 1);
  std::vector<double> col(static_cast<std::size_t>(angles), 0.0);
  double total = 0.0;
  for (int a = 0; a < angles; ++a) {
    std::vector<double> t(static_cast<std::size_t>(bins), 0.0);
    const double th = a * std::numbers::pi / angles;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        if (img[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          const double r = (i - 0.5 * (i0 + i1)) * std::cos(th) + (j - 0.5 * (j0 + j1)) * std::sin(th);
          t[static_cast<std::size_t>(std::floor((r + half) / step + 0.5))] += 1.0;
        }
    for (double v : t) col[static_cast<std::size_t>(a)] += v * v;
    total += col[static_cast<std::size_t>(a)];
  }
  for (double& v : col) v /= total;
  return col;
}

/// Per-group tally; ties go to the label whose first frame comes earliest.
inline std::map<int, int> majority_vote(const std::vector<int>& labels, const std::vector<int>& groups) {
  std::map<int, int> out;
  std::map<int, std::vector<int>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[groups[i]].push_back(labels[i]);
  for (auto& [g, ls] : members) {
    int best = ls[0], best_count = 0;
    for (int cand : ls) {
      const int c = static_cast<int>(std::count(ls.begin(), ls.end(), cand));
      if (c > best_count) {
        best = cand;
        best_count = c;
      }
    }
    out[g] = best;
  }
  return out;
}

/// counts[t][p] by scanning all samples for every cell.
inline std::vector<std::vector<int>> confusion_counts(const std::vector<int>& truth, const std::vector<int>& pred, int k) {
  std::vector<std::vector<int>> c(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), 0));
  for (int t = 0; t < k; ++t)
    for (int p = 0; p < k; ++p)
      for (std::size_t i = 0; i < truth.size(); ++i)
        c[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] += truth[i] == t && pred[i] == p;
  return c;
}

/// Random orthonormal D x d matrix by Gram-Schmidt on Gaussian columns.
inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd q(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    Eigen::VectorXd v(rows);
    for (Eigen::Index r = 0; r < rows; ++r) v(r) = n(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index p = 0; p < c; ++p) v -= q.col(p).dot(v) * q.col(p);
    q.col(c) = v.normalized();
  }
  return q;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = n(rng);
  return m;
}

}  // namespace oracle
