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

#include "motionfuse/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace motionfuse {

std::string_view to_string(View view) {
  return view == View::kTrajectory ? "trajectory" : "flow";
}

std::optional<std::size_t> SceneBundle::background_index() const {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!objects[i].is_background) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

std::optional<std::size_t> SceneBundle::object_index(ObjectId id) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id == id) return i;
  }
  return std::nullopt;
}

ImageNormalizer::ImageNormalizer(int width, int height)
    : cx(width / 2.0),
      cy(height / 2.0),
      scale(static_cast<double>(std::max(width, height))) {}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ a);
  h = splitmix(h ^ b);
  return splitmix(h ^ c);
}

namespace {

constexpr int kMaxPixelReports = 8;

std::string pixel_text(int x, int y) {
  std::ostringstream os;
  os << "pixel (" << x << ", " << y << ")";
  return os.str();
}

template <typename Field>
bool check_dims(const Field& f, const SceneBundle& b, std::string_view name,
                int frame, std::vector<Violation>& out) {
  if (f.width == b.width && f.height == b.height) return true;
  std::ostringstream os;
  os << "dimensions " << f.width << "x" << f.height << " differ from bundle "
     << b.width << "x" << b.height;
  out.push_back({std::string(name), frame, os.str()});
  return false;
}

}  // namespace

std::vector<Violation> validate_bundle(const SceneBundle& b) {
  std::vector<Violation> out;
  if (b.width <= 0 || b.height <= 0) {
    out.push_back({"width/height", -1, "image dimensions must be positive"});
  }
  if (b.frame_count < 2) {
    out.push_back({"frame_count", -1, "at least two frames are required"});
  }

  std::set<ObjectId> ids;
  int backgrounds = 0;
  for (const auto& o : b.objects) {
    if (o.id == kUnassigned) {
      out.push_back({"objects.id", -1, "id 0 is reserved for unassigned"});
    }
    if (!ids.insert(o.id).second) {
      out.push_back(
          {"objects.id", -1, "duplicate object id " + std::to_string(o.id)});
    }
    if (o.is_background) ++backgrounds;
  }
  if (backgrounds != 1) {
    out.push_back({"is_background", -1,
                   "expected exactly one background object, found " +
                       std::to_string(backgrounds)});
  }
  if (b.num_motions < 1 ||
      b.num_motions > static_cast<int>(b.objects.size())) {
    out.push_back({"num_motions", -1,
                   "must lie in [1, " + std::to_string(b.objects.size()) +
                       "], got " + std::to_string(b.num_motions)});
  }

  const auto frames = static_cast<std::size_t>(std::max(b.frame_count, 0));
  if (b.labels.size() != frames) {
    out.push_back({"LabelMap", -1,
                   "expected " + std::to_string(frames) + " label maps, got " +
                       std::to_string(b.labels.size())});
  }
  if (b.depth.size() != frames) {
    out.push_back({"DepthField", -1,
                   "expected " + std::to_string(frames) + " depth maps, got " +
                       std::to_string(b.depth.size())});
  }
  if (frames >= 1 && b.flow.size() != frames - 1) {
    out.push_back({"FlowField", -1,
                   "expected " + std::to_string(frames - 1) +
                       " flow fields, got " + std::to_string(b.flow.size())});
  }

  for (std::size_t f = 0; f < b.labels.size(); ++f) {
    const auto& lm = b.labels[f];
    if (!check_dims(lm, b, "LabelMap", static_cast<int>(f), out)) continue;
    std::set<std::uint16_t> unknown;
    for (auto v : lm.labels) {
      if (v != kUnassigned && !ids.count(v)) unknown.insert(v);
    }
    for (auto v : unknown) {
      out.push_back({"LabelMap", static_cast<int>(f),
                     "label " + std::to_string(v) + " is not a known object"});
    }
  }

  for (std::size_t f = 0; f < b.flow.size(); ++f) {
    const auto& fl = b.flow[f];
    if (!check_dims(fl, b, "FlowField", static_cast<int>(f), out)) continue;
    for (int y = 0; y < fl.height; ++y) {
      for (int x = 0; x < fl.width; ++x) {
        if (!std::isfinite(fl.u(x, y)) || !std::isfinite(fl.v(x, y))) {
          out.push_back({"FlowField", static_cast<int>(f),
                         "non-finite flow at " + pixel_text(x, y)});
          goto next_flow;  // one report per frame is enough
        }
      }
    }
  next_flow:;
  }

  for (std::size_t f = 0; f < b.depth.size(); ++f) {
    const auto& d = b.depth[f];
    if (!check_dims(d, b, "DepthField", static_cast<int>(f), out)) continue;
    int bad = 0;
    for (int y = 0; y < d.height; ++y) {
      for (int x = 0; x < d.width; ++x) {
        const float z = d.at(x, y);
        if (std::isfinite(z) && z > 0.0f) continue;
        if (++bad > kMaxPixelReports) continue;
        std::ostringstream os;
        os << "depth " << z << " at " << pixel_text(x, y)
           << " must be finite and positive";
        out.push_back({"DepthField", static_cast<int>(f), os.str()});
      }
    }
    if (bad > kMaxPixelReports) {
      out.push_back({"DepthField", static_cast<int>(f),
                     std::to_string(bad - kMaxPixelReports) +
                         " further invalid depth pixels"});
    }
  }

  std::set<int> track_ids;
  for (const auto& t : b.tracks.tracks) {
    const std::string tag = "track " + std::to_string(t.track_id);
    if (!track_ids.insert(t.track_id).second) {
      out.push_back({"TrackSet", -1, "duplicate " + tag});
    }
    if (!ids.count(t.object_id)) {
      out.push_back({"TrackSet", -1,
                     tag + " references unknown object " +
                         std::to_string(t.object_id)});
    }
    int prev = -1;
    for (const auto& p : t.points) {
      if (p.frame < 0 || p.frame >= b.frame_count) {
        out.push_back({"TrackSet", p.frame, tag + " frame out of range"});
      } else if (p.frame <= prev) {
        out.push_back(
            {"TrackSet", p.frame, tag + " frames not strictly increasing"});
      }
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        out.push_back({"TrackSet", p.frame, tag + " non-finite coordinate"});
      }
      prev = std::max(prev, p.frame);
    }
  }
  return out;
}

}  // namespace motionfuse
