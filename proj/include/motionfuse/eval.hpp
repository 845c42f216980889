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
#include <span>
#include <string>
#include <vector>

#include "motionfuse/core.hpp"

namespace motionfuse {

struct InstanceMatch {
  std::uint16_t pred = 0;
  std::uint16_t gt = 0;
  double f = 0.0;

  bool operator==(const InstanceMatch&) const = default;
};

struct MetricReport {
  double pu = 0.0;
  double ru = 0.0;
  double fu = 0.0;
  std::size_t num_pred = 0;
  std::size_t num_gt = 0;
  std::vector<InstanceMatch> matches;  // sorted by predicted id
};

/// One-to-one assignment maximizing the total weight (weights >= 0). Returns,
/// per row, the matched column or -1. Exhaustive search when both sides have
/// at most 8 entries, Hungarian algorithm otherwise.
std::vector<int> optimal_assignment(const Eigen::MatrixXd& weights);

/// Tube-level instance metrics. Label 0 is the static scene; every other
/// value is one moving instance across the whole video. Throws ShapeMismatch
/// when frame counts or dimensions differ.
MetricReport evaluate(std::span<const LabelMap> pred, std::span<const LabelMap> gt);

std::string to_json(const MetricReport& report);

/// Fraction of objects whose predicted cluster maps to their true group under
/// the best one-to-one relabeling.
double object_label_accuracy(std::span<const int> pred, std::span<const int> truth);

}  // namespace motionfuse
