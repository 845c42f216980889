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

// Co-regularized two-view spectral clustering over object affinities.
//
// Each view contributes the normalized operator L = D^-1/2 (A + eps I) D^-1/2.
// The embeddings maximize
//
//   tr(U1' L1 U1) + tr(U2' L2 U2) + lambda * ||U1' U2||_F^2
//
// by alternating exact eigen-solves, so the objective never decreases.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "motionfuse/affinity.hpp"
#include "motionfuse/core.hpp"

namespace motionfuse {

inline constexpr double kLaplacianEpsilon = 1e-8;

struct ViewLaplacian {
  Eigen::MatrixXd l;
  View view = View::kTrajectory;
};

/// Columns are orthonormal eigenvectors sorted by descending eigenvalue.
struct Embedding {
  Eigen::MatrixXd u;
  Eigen::VectorXd eigenvalues;
  View view = View::kTrajectory;
};

struct ClusterAssignment {
  std::vector<int> labels;   // per object, in [0, k_motions)
  std::vector<bool> moving;  // false iff in the background's cluster

  bool operator==(const ClusterAssignment&) const = default;
};

ViewLaplacian normalized_laplacian(const AffinityMatrix& a);

/// Top-k eigenvectors of a symmetric matrix, descending, each column's
/// largest-magnitude entry made positive. Throws EigenFailure.
Embedding top_eigenvectors(const Eigen::MatrixXd& m, int k, View view);

inline Embedding spectral_embedding(const ViewLaplacian& l, int k) {
  return top_eigenvectors(l.l, k, l.view);
}

struct CoregularizedEmbeddings {
  Embedding traj;
  Embedding flow;
  /// Objective after initialization and after every half-step.
  std::vector<double> objective;
};

double coregularization_objective(const ViewLaplacian& l_traj, const Embedding& u_traj,
                                  const ViewLaplacian& l_flow, const Embedding& u_flow,
                                  double lambda);

CoregularizedEmbeddings coregularized_embeddings(const ViewLaplacian& l_traj,
                                                 const ViewLaplacian& l_flow,
                                                 int k_motions, double lambda, int iters);

/// K-means over the length-normalized rows of the column-concatenated
/// embeddings, with farthest-point seeding. Labels are renumbered by first
/// appearance in object order. `background` indexes the background object.
ClusterAssignment cluster_objects(std::span<const Embedding> embeddings, int k_motions,
                                  std::uint64_t seed, int restarts,
                                  std::size_t background);

inline ClusterAssignment cluster_objects(const Embedding& u_traj, const Embedding& u_flow,
                                         int k_motions, std::uint64_t seed, int restarts,
                                         std::size_t background) {
  const Embedding both[] = {u_traj, u_flow};
  return cluster_objects(both, k_motions, seed, restarts, background);
}

}  // namespace motionfuse
