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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace motionfuse {

/// Label-map pixel value identifying an object. Zero means "unassigned".
using ObjectId = std::uint16_t;
inline constexpr ObjectId kUnassigned = 0;

enum class View { kTrajectory, kFlow };

std::string_view to_string(View view);

struct ObjectMeta {
  ObjectId id = kUnassigned;
  std::string name;
  bool is_background = false;

  bool operator==(const ObjectMeta&) const = default;
};

/// Row-major grid of object ids for one frame.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  LabelMap() = default;
  LabelMap(int w, int h, std::uint16_t fill = kUnassigned)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint16_t at(int x, int y) const { return labels[index(x, y)]; }
  std::uint16_t& at(int x, int y) { return labels[index(x, y)]; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  bool operator==(const LabelMap&) const = default;
};

/// Per-pixel displacement (pixels) from frame m to m+1, stored as
/// interleaved (u, v) float32 pairs.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> uv;

  FlowField() = default;
  FlowField(int w, int h)
      : width(w), height(h), uv(2 * static_cast<std::size_t>(w) * h, 0.0f) {}

  float u(int x, int y) const { return uv[2 * index(x, y)]; }
  float v(int x, int y) const { return uv[2 * index(x, y) + 1]; }
  void set(int x, int y, float u_px, float v_px) {
    uv[2 * index(x, y)] = u_px;
    uv[2 * index(x, y) + 1] = v_px;
  }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  bool operator==(const FlowField&) const = default;
};

/// Per-pixel relative depth, positive and unitless.
struct DepthField {
  int width = 0;
  int height = 0;
  std::vector<float> z;

  DepthField() = default;
  DepthField(int w, int h, float fill = 1.0f)
      : width(w), height(h), z(static_cast<std::size_t>(w) * h, fill) {}

  float at(int x, int y) const { return z[index(x, y)]; }
  float& at(int x, int y) { return z[index(x, y)]; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  bool operator==(const DepthField&) const = default;
};

struct TrackPoint {
  int frame = 0;
  double x = 0.0;  // pixels
  double y = 0.0;  // pixels

  bool operator==(const TrackPoint&) const = default;
};

struct Track {
  int track_id = 0;
  ObjectId object_id = kUnassigned;
  std::vector<TrackPoint> points;  // strictly increasing frames

  bool operator==(const Track&) const = default;
};

struct TrackSet {
  std::vector<Track> tracks;

  bool operator==(const TrackSet&) const = default;
};

/// One video's worth of precomputed motion cues.
///
/// `labels` and `depth` hold one entry per frame; `flow` holds one entry per
/// consecutive frame pair (frame_count - 1 entries), flow[m] mapping m to m+1.
struct SceneBundle {
  int width = 0;
  int height = 0;
  int frame_count = 0;
  std::vector<ObjectMeta> objects;
  int num_motions = 1;
  std::vector<LabelMap> labels;
  std::vector<FlowField> flow;
  std::vector<DepthField> depth;
  TrackSet tracks;

  /// Index into `objects` of the background, if exactly one is flagged.
  std::optional<std::size_t> background_index() const;
  /// Index into `objects` for an id, if present.
  std::optional<std::size_t> object_index(ObjectId id) const;

  bool operator==(const SceneBundle&) const = default;
};

/// Ground-truth motion group per object id; the background's group is 0.
struct GroundTruth {
  std::map<ObjectId, int> motion_group;

  bool operator==(const GroundTruth&) const = default;
};

struct Violation {
  std::string field;
  int frame = -1;  // -1 when the violation is not tied to a frame
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Checks every SceneBundle invariant. An empty result means the bundle is
/// well formed. Pure: identical bundles yield identical lists.
std::vector<Violation> validate_bundle(const SceneBundle& bundle);

/// Intrinsics-free normalization shared by every model fit:
/// x̂ = (x - width/2) / max(width, height), likewise for y.
/// Pixel centers sit at (col + 0.5, row + 0.5).
struct ImageNormalizer {
  double cx = 0.0;
  double cy = 0.0;
  double scale = 1.0;

  ImageNormalizer() = default;
  ImageNormalizer(int width, int height);

  double x(double px) const { return (px - cx) / scale; }
  double y(double py) const { return (py - cy) / scale; }
  double to_pixel_x(double nx) const { return nx * scale + cx; }
  double to_pixel_y(double ny) const { return ny * scale + cy; }
  /// Converts a displacement in pixels to normalized units.
  double delta(double d) const { return d / scale; }
};

/// SplitMix64 finalizer; used to derive independent RNG streams from
/// (seed, object, frame, ...) so fan-out order never changes results.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

}  // namespace motionfuse
