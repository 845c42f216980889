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

#include <optional>
#include <string_view>
#include <vector>

#include "motionfuse/affinity.hpp"
#include "motionfuse/config.hpp"
#include "motionfuse/core.hpp"
#include "motionfuse/fusion.hpp"

namespace motionfuse {

struct ViewSet {
  bool trajectory = true;
  bool flow = true;

  bool empty() const { return !trajectory && !flow; }
  /// Parses "traj,flow", "traj" or "flow" (also "trajectory"). Throws
  /// ConfigError on anything else.
  static ViewSet parse(std::string_view text);
  std::string to_string() const;
};

/// Per-frame-pair intermediates, kept only when requested.
struct ViewDebug {
  std::vector<ResidualMatrix> residuals;
  std::vector<ScoreMatrix> scores;
};

struct SegmentResult {
  ClusterAssignment assignment;
  /// Per frame: pixel -> 0 for the background's cluster, otherwise the
  /// moving cluster's 1-based rank among moving clusters.
  std::vector<LabelMap> label_maps;
  std::optional<AffinityMatrix> traj_affinity;
  std::optional<AffinityMatrix> flow_affinity;
  std::optional<ViewDebug> traj_debug;
  std::optional<ViewDebug> flow_debug;
  int ork_t = 0;
};

/// Correspondences per object (in bundle object order) between frames m and
/// m + gap, in normalized coordinates.
std::vector<std::vector<Correspondence>> object_correspondences(const SceneBundle& bundle,
                                                                int m, int gap);

/// Flow samples per object (bundle object order) at frame m, subsampled to
/// the configured cap. Objects below min_object_pixels get an empty list.
std::vector<std::vector<FlowSample>> object_flow_samples(const SceneBundle& bundle, int m,
                                                         const EngineConfig& cfg);

/// Full pipeline: per-view model fits, residual matrices, ORK scores,
/// accumulation, normalization, (co-regularized) spectral embedding and
/// k-means. Throws NotEnoughEvidence when some object never has a valid
/// model in any requested view.
SegmentResult segment_scene(const SceneBundle& bundle, const EngineConfig& cfg,
                            ViewSet views, bool keep_debug = false);

}  // namespace motionfuse
