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

#include <cstdint>
#include <optional>

#include "motionfuse/epipolar.hpp"

namespace motionfuse {

struct EngineConfig {
  /// Fundamental matrices relate frames m and m + frame_gap_traj.
  int frame_gap_traj = 3;
  RansacConfig ransac;
  /// ORK kernel width; empty selects ceil(k / 2).
  std::optional<int> ork_t;
  double lambda = 0.025;
  int coreg_iters = 10;
  int kmeans_restarts = 10;
  std::uint64_t seed = 0;
  /// Minimum correspondences an object needs in a frame pair to be scored.
  int min_track_points = 8;
  /// Minimum track length kept by track sanitation.
  int min_track_length = 2;
  /// Minimum mask pixels an object needs in a frame to be scored by flow.
  int min_object_pixels = 16;
  int flow_sample_cap = 1000;
  /// Track points closer than this to the image border are dropped (pixels).
  double edge_margin = 8.0;

  /// Throws ConfigError naming the first field that breaks an invariant.
  void validate() const;
};

}  // namespace motionfuse
