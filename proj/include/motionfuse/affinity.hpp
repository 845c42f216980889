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

// Object-level motion affinities built from model-fitting residuals with a
// weighted ordered residual kernel: every model ranks all objects by how well
// they fit it, the top t earn scores t, t-1, ..., 1, and two objects are
// similar when they keep scoring together under the same models.

#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "motionfuse/core.hpp"
#include "motionfuse/epipolar.hpp"
#include "motionfuse/flowdepth.hpp"

namespace motionfuse {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Entry (i, j): residual of object i's model on object j's data for one
/// frame pair and one view.
struct ResidualMatrix {
  Eigen::MatrixXd values;
  BoolMatrix valid;
  View view = View::kTrajectory;
  int frame = 0;

  Eigen::Index size() const { return values.rows(); }
  /// True when row i has at least one valid entry.
  bool row_valid(Eigen::Index i) const { return valid.row(i).any(); }
};

/// Entry (model i, object j) = max(t - rank_i(j), 0).
struct ScoreMatrix {
  Eigen::MatrixXi scores;
  View view = View::kTrajectory;
  int frame = 0;
};

struct AffinityMatrix {
  Eigen::MatrixXd a;
  View view = View::kTrajectory;
};

/// `models[i]` empty marks a degenerate epipolar model. Objects with fewer
/// than `min_points` correspondences are treated as missing data.
ResidualMatrix residual_matrix_traj(
    std::span<const std::optional<FundamentalMatrix>> models,
    std::span<const std::vector<Correspondence>> corrs, std::size_t min_points);

/// `models[i]` empty marks an object whose flow model could not be fit.
/// Objects with fewer than `min_samples` samples are treated as missing data.
ResidualMatrix residual_matrix_flow(
    std::span<const std::optional<FlowDepthModel>> models,
    std::span<const std::vector<FlowSample>> samples,
    std::size_t min_samples = 4);

/// Ranks each valid row ascending (ties to the lower object index) and
/// scores max(t - rank, 0). Invalid entries and rows score zero.
ScoreMatrix ork_scores(const ResidualMatrix& r, int t);

/// Default kernel width: ceil(k / 2).
int default_ork_t(Eigen::Index k);

/// Sum over frame pairs of S^T S, in the given order. Throws EmptyInput.
AffinityMatrix accumulate_affinity(std::span<const ScoreMatrix> scores);

/// Row-normalizes (zero rows stay zero), then symmetrizes with (M + M^T)/2.
AffinityMatrix normalize_affinity(const AffinityMatrix& a);

}  // namespace motionfuse
