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

#include "motionfuse/flowdepth.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "motionfuse/errors.hpp"

namespace motionfuse {

DesignRows design_rows(const FlowSample& s) {
  const double x = s.x, y = s.y, w = s.inv_z;
  DesignRows r;
  r.row_u << 1.0, w, -x * w, -y, x * x, -x * y, 0.0, 0.0;
  r.row_v << 0.0, 0.0, -y * w, -x, x * y, y * y, 1.0, w;
  r.target_u = s.u;
  r.target_v = s.v;
  return r;
}

Eigen::Vector2d FlowDepthModel::predict(double x, double y, double inv_z) const {
  const auto rows = design_rows({x, y, inv_z, 0.0, 0.0});
  return {rows.row_u.dot(theta), rows.row_v.dot(theta)};
}

double inverse_depth(double z) {
  if (!(z > 0.0)) return kMaxInverseDepth;
  return std::min(1.0 / z, kMaxInverseDepth);
}

FlowDepthModel fit_flow_depth_model(std::span<const FlowSample> samples) {
  if (samples.size() < 4) {
    throw InsufficientSamples("flow model needs >= 4 samples, got " +
                              std::to_string(samples.size()));
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(2 * n, 8);
  Eigen::VectorXd b(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto r = design_rows(samples[static_cast<std::size_t>(k)]);
    a.row(2 * k) = r.row_u.transpose();
    a.row(2 * k + 1) = r.row_v.transpose();
    b(2 * k) = r.target_u;
    b(2 * k + 1) = r.target_v;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  FlowDepthModel model;
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  model.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  model.ill_conditioned = !(model.condition <= kIllConditionedThreshold);

  // Pseudo-inverse with the same cut-off as the conditioning flag: directions
  // the data cannot resolve get zero weight, which is the minimum-norm fit.
  const Eigen::VectorXd utb = svd.matrixU().transpose() * b;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(8);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > smax / kIllConditionedThreshold) coef(i) = utb(i) / sv(i);
  }
  model.theta = svd.matrixV() * coef;
  return model;
}

double flow_model_residual(const FlowDepthModel& model,
                           std::span<const FlowSample> samples) {
  if (samples.empty()) throw InsufficientSamples("residual over an empty sample set");
  double sum = 0.0;
  for (const auto& s : samples) {
    const Eigen::Vector2d pred = model.predict(s.x, s.y, s.inv_z);
    const double du = s.u - pred(0);
    const double dv = s.v - pred(1);
    sum += du * du + dv * dv;
  }
  return sum / static_cast<double>(samples.size());
}

std::vector<FlowSample> subsample_flow(std::span<const FlowSample> samples,
                                       std::size_t cap, std::uint64_t seed) {
  if (samples.size() <= cap) return {samples.begin(), samples.end()};
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates; the chosen prefix is re-sorted so the result keeps
  // raster order.
  for (std::size_t i = 0; i < cap; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  std::vector<FlowSample> out;
  out.reserve(cap);
  for (auto i : idx) out.push_back(samples[i]);
  return out;
}

}  // namespace motionfuse
