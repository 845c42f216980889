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

#include "motionfuse/tracks.hpp"

#include <cmath>

namespace motionfuse {

namespace {

bool near_border(const TrackPoint& p, int width, int height, double margin) {
  return p.x < margin || p.y < margin || p.x > width - margin || p.y > height - margin;
}

bool inside_mask(const TrackPoint& p, const LabelMap& mask, ObjectId id) {
  const double fx = std::floor(p.x);
  const double fy = std::floor(p.y);
  if (fx < 0 || fy < 0 || fx >= mask.width || fy >= mask.height) return false;
  return mask.at(static_cast<int>(fx), static_cast<int>(fy)) == id;
}

}  // namespace

TrackSet sanitize_tracks(const TrackSet& tracks, std::span<const LabelMap> masks,
                         double edge_margin, int min_points) {
  TrackSet out;
  for (const auto& t : tracks.tracks) {
    Track kept{t.track_id, t.object_id, {}};
    for (const auto& p : t.points) {
      if (p.frame < 0 || static_cast<std::size_t>(p.frame) >= masks.size()) continue;
      const LabelMap& mask = masks[static_cast<std::size_t>(p.frame)];
      if (near_border(p, mask.width, mask.height, edge_margin)) continue;
      if (!inside_mask(p, mask, t.object_id)) continue;
      kept.points.push_back(p);
    }
    if (static_cast<int>(kept.points.size()) >= min_points) {
      out.tracks.push_back(std::move(kept));
    }
  }
  return out;
}

}  // namespace motionfuse
