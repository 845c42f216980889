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

// Scene bundle directories and their file formats.
//
// A bundle directory holds:
//
//   manifest.json          dimensions, objects, num_motions, file patterns
//   labels/0000.mseg ...   one per frame
//   flow/0000.mflo ...     one per consecutive frame pair
//   depth/0000.mdep ...    one per frame
//   tracks.json
//   ground_truth.json      optional, {object_id: motion_group}
//
// Binary layout (little-endian): 4-byte magic, u32 width, u32 height, then
// row-major pixels. MFLO stores interleaved float32 (u, v) in pixels, MDEP
// float32 depth, MSEG u16 labels. JSON is written with sorted keys and a
// two-space indent, so writing what was read reproduces the same bytes.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "motionfuse/config.hpp"
#include "motionfuse/core.hpp"
#include "motionfuse/segment.hpp"

namespace motionfuse {

namespace fs = std::filesystem;

void write_flow(const FlowField& flow, const fs::path& path);
void write_depth(const DepthField& depth, const fs::path& path);
void write_label_map(const LabelMap& labels, const fs::path& path);

/// Readers throw FormatError naming the file when the magic is wrong or the
/// payload size differs from width * height * element size.
FlowField read_flow(const fs::path& path);
DepthField read_depth(const fs::path& path);
LabelMap read_label_map(const fs::path& path);

std::string tracks_to_json(const TrackSet& tracks);
TrackSet tracks_from_json(const std::string& text, const std::string& source);

/// Throws ManifestError for a missing directory, manifest or referenced file,
/// bad manifest fields (num_motions < 1 included) and label ids that are not
/// declared objects; FormatError for malformed binaries.
SceneBundle read_bundle(const fs::path& dir);
void write_bundle(const SceneBundle& bundle, const fs::path& dir);

void write_ground_truth(const GroundTruth& truth, const fs::path& path);
GroundTruth read_ground_truth(const fs::path& path);

/// Per-frame moving-instance maps implied by ground truth: each pixel takes
/// its object's motion group (0 for the static scene).
std::vector<LabelMap> ground_truth_instance_maps(const SceneBundle& bundle,
                                                 const GroundTruth& truth);

/// Writes result.json and labels/NNNN.mseg (moving-instance maps).
void write_segment_output(const SceneBundle& bundle, const SegmentResult& result,
                          const EngineConfig& cfg, ViewSet views, const fs::path& dir);

/// Writes per-frame-pair residual and score matrices to debug.json.
void write_segment_debug(const SegmentResult& result, const fs::path& dir);

/// Moving-instance maps from either a segment output directory (result.json)
/// or a scene bundle with ground_truth.json.
std::vector<LabelMap> read_instance_maps(const fs::path& dir);

}  // namespace motionfuse
