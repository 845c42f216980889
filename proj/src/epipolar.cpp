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

#include "motionfuse/epipolar.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "motionfuse/errors.hpp"

namespace motionfuse {

namespace {

// Design-matrix rank test on conditioned data: sigma_8 / sigma_1 below this
// means the null space is at least two dimensional.
constexpr double kRankTolerance = 1e-10;
// Entries within this relative distance of the largest magnitude count as
// tied for the sign rule; the first in row-major order wins.
constexpr double kSignTieTolerance = 1e-9;

Eigen::Vector3d dehomogenize(const Eigen::Vector3d& p) { return p / p.z(); }

}  // namespace

ConditionedPoints condition_points(std::span<const Eigen::Vector3d> points) {
  if (points.size() < 2) {
    throw DegenerateInput("conditioning needs at least two points");
  }
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += dehomogenize(p).head<2>();
  centroid /= static_cast<double>(points.size());

  double mean_dist = 0.0;
  for (const auto& p : points) {
    mean_dist += (dehomogenize(p).head<2>() - centroid).norm();
  }
  mean_dist /= static_cast<double>(points.size());
  if (!(mean_dist > 0.0) || !std::isfinite(mean_dist)) {
    throw DegenerateInput("all points coincide; cannot condition");
  }

  const double s = std::sqrt(2.0) / mean_dist;
  ConditionedPoints out;
  out.transform << s, 0, -s * centroid.x(),  //
      0, s, -s * centroid.y(),               //
      0, 0, 1;
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(out.transform * dehomogenize(p));
  return out;
}

Eigen::Matrix3d canonicalize_fundamental(const Eigen::Matrix3d& f) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d sv = svd.singularValues();
  sv(2) = 0.0;
  Eigen::Matrix3d g = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  const double norm = g.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateInput("fundamental matrix has no rank-2 component");
  }
  g /= norm;

  const double max_abs = g.cwiseAbs().maxCoeff();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (std::abs(g(r, c)) >= max_abs * (1.0 - kSignTieTolerance)) {
        return g(r, c) < 0.0 ? Eigen::Matrix3d(-g) : g;
      }
    }
  }
  return g;
}

FundamentalMatrix eight_point(std::span<const Correspondence> corrs) {
  if (corrs.size() < 8) {
    throw InsufficientPoints("eight-point solve needs >= 8 correspondences, got " +
                             std::to_string(corrs.size()));
  }
  std::vector<Eigen::Vector3d> left, right;
  left.reserve(corrs.size());
  right.reserve(corrs.size());
  for (const auto& c : corrs) {
    left.push_back(c.p);
    right.push_back(c.p_prime);
  }
  const ConditionedPoints cl = condition_points(left);
  const ConditionedPoints cr = condition_points(right);

  // Row k encodes p'^T F p = 0 with F flattened row-major.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(corrs.size()), 9);
  for (std::size_t k = 0; k < corrs.size(); ++k) {
    const Eigen::Vector3d& p = cl.points[k];
    const Eigen::Vector3d& q = cr.points[k];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(static_cast<Eigen::Index>(k), 3 * i + j) = q(i) * p(j);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() < 8 || !(sv(0) > 0.0) || sv(7) / sv(0) < kRankTolerance) {
    throw DegenerateInput("design matrix rank < 8");
  }
  const Eigen::VectorXd v = svd.matrixV().col(8);
  Eigen::Matrix3d fc;
  fc << v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7), v(8);

  // Enforce rank 2 in the conditioned frame, then undo the conditioning.
  Eigen::JacobiSVD<Eigen::Matrix3d> fsvd(fc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d fsv = fsvd.singularValues();
  fsv(2) = 0.0;
  fc = fsvd.matrixU() * fsv.asDiagonal() * fsvd.matrixV().transpose();
  const Eigen::Matrix3d f = cr.transform.transpose() * fc * cl.transform;

  FundamentalMatrix out;
  out.f = canonicalize_fundamental(f);
  out.inlier_ratio = 1.0;
  out.n_support = static_cast<int>(corrs.size());
  return out;
}

std::optional<double> sampson_distance(const Eigen::Matrix3d& f,
                                       const Correspondence& c) {
  const Eigen::Vector3d fp = f * c.p;
  const Eigen::Vector3d ftq = f.transpose() * c.p_prime;
  const double num = c.p_prime.dot(fp);
  const double den = fp(0) * fp(0) + fp(1) * fp(1) + ftq(0) * ftq(0) + ftq(1) * ftq(1);
  if (!(den > 0.0)) return std::nullopt;
  return num * num / den;
}

namespace {

int count_inliers(const Eigen::Matrix3d& f, std::span<const Correspondence> corrs,
                  double threshold, std::vector<char>* mask) {
  int n = 0;
  if (mask) mask->assign(corrs.size(), 0);
  for (std::size_t k = 0; k < corrs.size(); ++k) {
    const auto d = sampson_distance(f, corrs[k]);
    if (d && *d < threshold) {
      ++n;
      if (mask) (*mask)[k] = 1;
    }
  }
  return n;
}

// Floyd's algorithm: eight distinct indices in [0, n).
std::array<std::size_t, 8> sample_eight(std::size_t n, std::mt19937_64& rng) {
  std::array<std::size_t, 8> out{};
  std::size_t filled = 0;
  for (std::size_t j = n - 8; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    const bool seen = std::find(out.begin(), out.begin() + filled, t) != out.begin() + filled;
    out[filled++] = seen ? j : t;
  }
  return out;
}

}  // namespace

RansacResult ransac_fit_fundamental(std::span<const Correspondence> corrs,
                                    const RansacConfig& cfg) {
  if (corrs.size() < 8) return {std::nullopt, Degeneracy::kTooFewPoints};

  std::mt19937_64 rng(cfg.rng_seed);
  int best_count = 0;
  std::optional<Eigen::Matrix3d> best;
  std::array<Correspondence, 8> sample;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const auto idx = sample_eight(corrs.size(), rng);
    for (std::size_t s = 0; s < 8; ++s) sample[s] = corrs[idx[s]];
    FundamentalMatrix candidate;
    try {
      candidate = eight_point(sample);
    } catch (const DegenerateInput&) {
      continue;
    }
    const int n = count_inliers(candidate.f, corrs, cfg.sampson_inlier_threshold, nullptr);
    if (n > best_count) {
      best_count = n;
      best = candidate.f;
    }
    if (best_count == static_cast<int>(corrs.size())) break;
  }
  if (!best) return {std::nullopt, Degeneracy::kRankDeficient};

  const double total = static_cast<double>(corrs.size());
  if (best_count < 8 || best_count / total < cfg.min_inlier_ratio) {
    return {std::nullopt, Degeneracy::kLowInlierRatio};
  }

  std::vector<char> mask;
  count_inliers(*best, corrs, cfg.sampson_inlier_threshold, &mask);
  std::vector<Correspondence> inliers;
  inliers.reserve(static_cast<std::size_t>(best_count));
  for (std::size_t k = 0; k < corrs.size(); ++k) {
    if (mask[k]) inliers.push_back(corrs[k]);
  }

  FundamentalMatrix refit;
  try {
    refit = eight_point(inliers);
  } catch (const DegenerateInput&) {
    return {std::nullopt, Degeneracy::kRankDeficient};
  }
  refit.n_support = count_inliers(refit.f, corrs, cfg.sampson_inlier_threshold, nullptr);
  refit.inlier_ratio = refit.n_support / total;
  if (refit.n_support < 8 || refit.inlier_ratio < cfg.min_inlier_ratio) {
    return {std::nullopt, Degeneracy::kLowInlierRatio};
  }
  return {refit, Degeneracy::kNone};
}

}  // namespace motionfuse
