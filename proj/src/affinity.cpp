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

#include "motionfuse/affinity.hpp"

#include <algorithm>
#include <numeric>

#include "motionfuse/errors.hpp"

namespace motionfuse {

ResidualMatrix residual_matrix_traj(
    std::span<const std::optional<FundamentalMatrix>> models,
    std::span<const std::vector<Correspondence>> corrs, std::size_t min_points) {
  if (models.size() != corrs.size()) {
    throw ShapeMismatch("one model slot per object is required");
  }
  const auto k = static_cast<Eigen::Index>(models.size());
  ResidualMatrix r{Eigen::MatrixXd::Zero(k, k), BoolMatrix::Constant(k, k, false),
                   View::kTrajectory, 0};
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& model = models[static_cast<std::size_t>(i)];
    if (!model) continue;
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& data = corrs[static_cast<std::size_t>(j)];
      if (data.size() < min_points) continue;
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& c : data) {
        if (const auto d = sampson_distance(*model, c)) {
          sum += *d;
          ++n;
        }
      }
      if (n == 0) continue;
      r.values(i, j) = sum / static_cast<double>(n);
      r.valid(i, j) = true;
    }
  }
  return r;
}

ResidualMatrix residual_matrix_flow(
    std::span<const std::optional<FlowDepthModel>> models,
    std::span<const std::vector<FlowSample>> samples, std::size_t min_samples) {
  if (models.size() != samples.size()) {
    throw ShapeMismatch("one model slot per object is required");
  }
  const auto k = static_cast<Eigen::Index>(models.size());
  ResidualMatrix r{Eigen::MatrixXd::Zero(k, k), BoolMatrix::Constant(k, k, false),
                   View::kFlow, 0};
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& model = models[static_cast<std::size_t>(i)];
    if (!model) continue;
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& data = samples[static_cast<std::size_t>(j)];
      if (data.empty() || data.size() < min_samples) continue;
      r.values(i, j) = flow_model_residual(*model, data);
      r.valid(i, j) = true;
    }
  }
  return r;
}

int default_ork_t(Eigen::Index k) { return static_cast<int>((k + 1) / 2); }

ScoreMatrix ork_scores(const ResidualMatrix& r, int t) {
  const Eigen::Index k = r.size();
  ScoreMatrix s{Eigen::MatrixXi::Zero(k, k), r.view, r.frame};
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < k; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (r.valid(i, j)) order.push_back(j);
    }
    // Stable sort keeps the lower object index first among equal residuals.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return r.values(i, a) < r.values(i, b);
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      s.scores(i, order[rank]) = std::max(t - static_cast<int>(rank), 0);
    }
  }
  return s;
}

AffinityMatrix accumulate_affinity(std::span<const ScoreMatrix> scores) {
  if (scores.empty()) throw EmptyInput("no score matrices to accumulate");
  const Eigen::Index k = scores.front().scores.rows();
  AffinityMatrix out{Eigen::MatrixXd::Zero(k, k), scores.front().view};
  for (const auto& s : scores) {
    if (s.scores.rows() != k || s.scores.cols() != k) {
      throw ShapeMismatch("score matrices must share one k x k shape");
    }
    const Eigen::MatrixXd sd = s.scores.cast<double>();
    out.a.noalias() += sd.transpose() * sd;
  }
  return out;
}

AffinityMatrix normalize_affinity(const AffinityMatrix& a) {
  Eigen::MatrixXd m = a.a;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double sum = m.row(i).sum();
    if (sum > 0.0) m.row(i) /= sum;
  }
  return {0.5 * (m + m.transpose()), a.view};
}

}  // namespace motionfuse
