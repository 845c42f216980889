// Copyright 2026 The motionfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "motionfuse/fusion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "motionfuse/errors.hpp"

namespace motionfuse {

ViewLaplacian normalized_laplacian(const AffinityMatrix& a) {
  const Eigen::Index k = a.a.rows();
  const Eigen::MatrixXd guarded =
      a.a + kLaplacianEpsilon * Eigen::MatrixXd::Identity(k, k);
  const Eigen::VectorXd inv_sqrt_deg =
      guarded.rowwise().sum().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd l = inv_sqrt_deg.asDiagonal() * guarded * inv_sqrt_deg.asDiagonal();
  // Exact symmetry regardless of rounding in the scaling.
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) l(j, i) = l(i, j);
  }
  return {l, a.view};
}

Embedding top_eigenvectors(const Eigen::MatrixXd& m, int k, View view) {
  const Eigen::Index n = m.rows();
  if (k < 1 || k > n) {
    throw EigenFailure("requested " + std::to_string(k) + " eigenvectors of a " +
                       std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) {
    throw EigenFailure("symmetric eigensolver did not converge");
  }
  Embedding out;
  out.view = view;
  out.u.resize(n, k);
  out.eigenvalues.resize(k);
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = n - 1 - c;  // eigenvalues come back ascending
    Eigen::VectorXd v = es.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.u.col(c) = v;
    out.eigenvalues(c) = es.eigenvalues()(src);
  }
  return out;
}

double coregularization_objective(const ViewLaplacian& l_traj, const Embedding& u_traj,
                                  const ViewLaplacian& l_flow, const Embedding& u_flow,
                                  double lambda) {
  const double t1 = (u_traj.u.transpose() * l_traj.l * u_traj.u).trace();
  const double t2 = (u_flow.u.transpose() * l_flow.l * u_flow.u).trace();
  const double agree = (u_traj.u.transpose() * u_flow.u).squaredNorm();
  return t1 + t2 + lambda * agree;
}

CoregularizedEmbeddings coregularized_embeddings(const ViewLaplacian& l_traj,
                                                 const ViewLaplacian& l_flow,
                                                 int k_motions, double lambda, int iters) {
  if (l_traj.l.rows() != l_flow.l.rows()) {
    throw ShapeMismatch("views must describe the same objects");
  }
  if (lambda < 0.0) throw ConfigError("lambda must be non-negative");

  CoregularizedEmbeddings out;
  out.flow = spectral_embedding(l_flow, k_motions);
  out.traj = spectral_embedding(l_traj, k_motions);
  out.objective.push_back(
      coregularization_objective(l_traj, out.traj, l_flow, out.flow, lambda));
  for (int it = 0; it < iters; ++it) {
    out.traj = top_eigenvectors(
        l_traj.l + lambda * out.flow.u * out.flow.u.transpose(), k_motions, l_traj.view);
    out.objective.push_back(
        coregularization_objective(l_traj, out.traj, l_flow, out.flow, lambda));
    out.flow = top_eigenvectors(
        l_flow.l + lambda * out.traj.u * out.traj.u.transpose(), k_motions, l_flow.view);
    out.objective.push_back(
        coregularization_objective(l_traj, out.traj, l_flow, out.flow, lambda));
  }
  return out;
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double wcss = std::numeric_limits<double>::infinity();
};

KMeansRun lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = centers.rows();
  KMeansRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  constexpr int kMaxIters = 100;
  for (int it = 0; it < kMaxIters; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (run.labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        run.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = run.labels[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      counts(c) += 1.0;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts(c) > 0.0) centers.row(c) = sums.row(c) / counts(c);
    }
  }
  run.wcss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.wcss += (x.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return run;
}

Eigen::MatrixXd farthest_point_seeds(const Eigen::MatrixXd& x, int k, Eigen::Index first) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  centers.row(0) = x.row(first);
  Eigen::VectorXd nearest = (x.rowwise() - x.row(first)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    Eigen::Index far = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (nearest(i) > nearest(far)) far = i;
    }
    centers.row(c) = x.row(far);
    nearest = nearest.cwiseMin((x.rowwise() - x.row(far)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

ClusterAssignment cluster_objects(std::span<const Embedding> embeddings, int k_motions,
                                  std::uint64_t seed, int restarts,
                                  std::size_t background) {
  if (embeddings.empty()) throw EmptyInput("no embeddings to cluster");
  const Eigen::Index n = embeddings.front().u.rows();
  Eigen::Index dims = 0;
  for (const auto& e : embeddings) {
    if (e.u.rows() != n) throw ShapeMismatch("embeddings must share rows");
    dims += e.u.cols();
  }
  if (k_motions < 1 || k_motions > n) {
    throw ConfigError("k_motions must lie in [1, number of objects]");
  }
  if (background >= static_cast<std::size_t>(n)) {
    throw ConfigError("background index out of range");
  }

  Eigen::MatrixXd x(n, dims);
  Eigen::Index col = 0;
  for (const auto& e : embeddings) {
    x.middleCols(col, e.u.cols()) = e.u;
    col += e.u.cols();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = x.row(i).norm();
    if (norm > 0.0) x.row(i) /= norm;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  KMeansRun best;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    KMeansRun run = lloyd(x, farthest_point_seeds(x, k_motions, pick(rng)));
    if (run.wcss < best.wcss) best = std::move(run);
  }

  // Renumber by first appearance so equal partitions print identically.
  std::vector<int> remap(static_cast<std::size_t>(k_motions), -1);
  int next = 0;
  ClusterAssignment out;
  out.labels.reserve(static_cast<std::size_t>(n));
  for (int l : best.labels) {
    if (remap[static_cast<std::size_t>(l)] < 0) remap[static_cast<std::size_t>(l)] = next++;
    out.labels.push_back(remap[static_cast<std::size_t>(l)]);
  }
  const int bg_label = out.labels[background];
  for (int l : out.labels) out.moving.push_back(l != bg_label);
  return out;
}

}  // namespace motionfuse
