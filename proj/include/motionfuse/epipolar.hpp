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

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace motionfuse {

/// A tracked point seen in frame m (p) and frame m + gap (p_prime), both in
/// normalized homogeneous coordinates with third component 1.
struct Correspondence {
  Eigen::Vector3d p = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d p_prime = Eigen::Vector3d::UnitZ();
};

/// Rank-2 epipolar model with unit Frobenius norm and its largest-magnitude
/// entry positive.
struct FundamentalMatrix {
  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  double inlier_ratio = 1.0;
  int n_support = 0;
};

struct RansacConfig {
  int max_iters = 500;
  double sampson_inlier_threshold = 1e-4;  // squared normalized units
  double min_inlier_ratio = 0.5;
  std::uint64_t rng_seed = 0;
};

struct ConditionedPoints {
  std::vector<Eigen::Vector3d> points;
  Eigen::Matrix3d transform = Eigen::Matrix3d::Identity();
};

/// Hartley conditioning: translate the centroid to the origin and scale so
/// the mean distance from it is sqrt(2). Throws DegenerateInput when fewer
/// than two distinct points are given.
ConditionedPoints condition_points(std::span<const Eigen::Vector3d> points);

/// Forces rank 2, unit Frobenius norm and a positive largest-magnitude entry.
/// Proportional inputs map to the same output.
Eigen::Matrix3d canonicalize_fundamental(const Eigen::Matrix3d& f);

/// Normalized eight-point solve. Throws InsufficientPoints below eight
/// correspondences and DegenerateInput when the design matrix has rank < 8.
FundamentalMatrix eight_point(std::span<const Correspondence> corrs);

/// Sampson distance (squared, normalized units). Empty when the denominator
/// vanishes; callers treat that as a missing datum.
std::optional<double> sampson_distance(const Eigen::Matrix3d& f,
                                       const Correspondence& c);
inline std::optional<double> sampson_distance(const FundamentalMatrix& f,
                                              const Correspondence& c) {
  return sampson_distance(f.f, c);
}

enum class Degeneracy {
  kNone,
  kTooFewPoints,
  kLowInlierRatio,
  kRankDeficient,
};

struct RansacResult {
  std::optional<FundamentalMatrix> model;
  Degeneracy reason = Degeneracy::kNone;

  bool degenerate() const { return !model.has_value(); }
};

/// Fixed-budget RANSAC around eight_point. Every failure mode is reported as
/// a degenerate result instead of an exception; such models are not used.
RansacResult ransac_fit_fundamental(std::span<const Correspondence> corrs,
                                    const RansacConfig& cfg);

}  // namespace motionfuse
