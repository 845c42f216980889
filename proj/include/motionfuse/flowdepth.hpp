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

// Linearized optical-flow + relative-depth motion model:
//
//   u = a + b/z - c x/z - d y + e x^2 - f x y
//   v = g + h/z - c y/z - d x + e x y + f y^2
//
// c, d, e, f are shared between the two equations. Coordinates and flow are
// in normalized image units; z is relative depth.

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace motionfuse {

/// Largest inverse depth fed to the model; relative depth can approach 0.
inline constexpr double kMaxInverseDepth = 1e6;
/// Condition estimate above which a fit is flagged ill-conditioned.
inline constexpr double kIllConditionedThreshold = 1e10;

struct FlowSample {
  double x = 0.0;
  double y = 0.0;
  double inv_z = 1.0;
  double u = 0.0;
  double v = 0.0;
};

/// Coefficients ordered (a, b, c, d, e, f, g, h).
struct FlowDepthModel {
  Eigen::Matrix<double, 8, 1> theta = Eigen::Matrix<double, 8, 1>::Zero();
  bool ill_conditioned = false;
  double condition = 1.0;

  Eigen::Vector2d predict(double x, double y, double inv_z) const;
};

struct DesignRows {
  Eigen::Matrix<double, 8, 1> row_u;
  Eigen::Matrix<double, 8, 1> row_v;
  double target_u = 0.0;
  double target_v = 0.0;
};

DesignRows design_rows(const FlowSample& s);

/// Clamped inverse of a relative depth value.
double inverse_depth(double z);

/// Least-squares fit over the stacked design rows; minimum-norm when the
/// design is rank deficient. Throws InsufficientSamples below 4 samples.
FlowDepthModel fit_flow_depth_model(std::span<const FlowSample> samples);

/// Mean over samples of (u - û)^2 + (v - v̂)^2. Throws InsufficientSamples
/// on an empty sample set.
double flow_model_residual(const FlowDepthModel& model,
                           std::span<const FlowSample> samples);

/// Uniform draw of at most `cap` samples without replacement, keeping the
/// original order. Inputs at or below the cap are returned unchanged.
std::vector<FlowSample> subsample_flow(std::span<const FlowSample> samples,
                                       std::size_t cap, std::uint64_t seed);

}  // namespace motionfuse
