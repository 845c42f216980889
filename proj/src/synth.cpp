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

#include "motionfuse/synth.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "motionfuse/errors.hpp"

namespace motionfuse {
namespace {

using Eigen::Vector3d;

constexpr double kFloorY = 0.8;
constexpr double kWallZ = 14.0;
constexpr int kMaxLayoutAttempts = 24;
constexpr int kMinTracksPerObject = 16;
constexpr int kMinVisiblePixels = 16;
constexpr double kSeedBorder = 12.0;
constexpr int kUsableGap = 3;
constexpr int kMinSpanningTracks = 12;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double signed_uniform(std::mt19937_64& rng, double lo, double hi) {
  const double v = uniform(rng, lo, hi);
  return std::bernoulli_distribution(0.5)(rng) ? v : -v;
}

Eigen::Matrix3d rot_x(double a) { return Eigen::AngleAxisd(a, Vector3d::UnitX()).matrix(); }
Eigen::Matrix3d rot_y(double a) { return Eigen::AngleAxisd(a, Vector3d::UnitY()).matrix(); }

double deg(double d) { return d * std::numbers::pi / 180.0; }

RigidBody make_room(int frames) {
  RigidBody room;
  room.id = 1;
  room.name = "background";
  room.is_background = true;
  Facet floor;
  floor.center = Vector3d(0.0, kFloorY, 50.0);
  floor.normal = -Vector3d::UnitY();
  floor.axis_u = Vector3d::UnitX();
  floor.axis_v = Vector3d::UnitZ();
  floor.half_u = 200.0;
  floor.half_v = 60.0;
  Facet wall;
  wall.center = Vector3d(0.0, kFloorY - 30.0, kWallZ);
  wall.normal = -Vector3d::UnitZ();
  wall.axis_u = Vector3d::UnitX();
  wall.axis_v = Vector3d::UnitY();
  wall.half_u = 200.0;
  wall.half_v = 30.0;
  room.facets = {floor, wall};
  room.poses.assign(static_cast<std::size_t>(frames), Pose{});
  return room;
}

// Box whose center projects to normalized (nx, ny) at depth z in the frame-0
// camera (which sits at the world origin), translating by `velocity` per frame.
RigidBody make_box(std::mt19937_64& rng, ObjectId id, double nx, double ny, double z,
                   const Vector3d& half, const Vector3d& velocity, int frames, int group) {
  RigidBody b;
  b.id = id;
  b.name = "box_" + std::to_string(id);
  b.facets = box_facets(half);
  b.motion_group = group;
  const Eigen::Matrix3d r = rot_y(signed_uniform(rng, deg(25), deg(55))) *
                            rot_x(uniform(rng, deg(-20), deg(-8)));
  const Vector3d c0(nx * z, ny * z, z);
  for (int f = 0; f < frames; ++f) {
    b.poses.push_back({r, c0 + static_cast<double>(f) * velocity});
  }
  return b;
}

std::vector<Pose> translating_camera(const Vector3d& velocity, int frames) {
  std::vector<Pose> poses;
  for (int f = 0; f < frames; ++f) poses.push_back({Eigen::Matrix3d::Identity(),
                                                    static_cast<double>(f) * velocity});
  return poses;
}

// Evenly spaced horizontal slots with jitter, shuffled, centered on `shift`.
std::vector<std::pair<double, double>> image_slots(std::mt19937_64& rng, int n,
                                                   double shift = 0.0) {
  std::vector<std::pair<double, double>> slots;
  if (n <= 0) return slots;
  const int rows = n > 5 ? 2 : 1;
  const int per_row = (n + rows - 1) / rows;
  for (int i = 0; i < n; ++i) {
    const int row = i / per_row;
    const int col = i % per_row;
    const double span = 0.72 - 2.0 * std::abs(shift);
    const double x = per_row == 1 ? 0.0 : -span / 2 + span * col / (per_row - 1);
    const double y = rows == 1 ? 0.02 : (row == 0 ? -0.13 : 0.12);
    slots.emplace_back(shift + x + uniform(rng, -0.025, 0.025),
                       y + uniform(rng, -0.02, 0.02));
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  return slots;
}

Vector3d box_half(std::mt19937_64& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

// Angle of a lateral direction folded into [0, pi); epipolar geometry of a
// lateral translation only sees the line direction.
double line_angle(const Vector3d& v) {
  double a = std::atan2(v.y(), v.x());
  if (a < 0) a += std::numbers::pi;
  if (a >= std::numbers::pi) a -= std::numbers::pi;
  return a;
}

double line_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, std::numbers::pi - d);
}

// Relative (object minus camera) lateral velocities whose line directions are
// pairwise separated by at least `min_gap` radians, including from the
// static-scene direction -camera.
std::vector<Vector3d> separated_velocities(std::mt19937_64& rng, const Vector3d& camera,
                                           int count, double min_gap) {
  std::vector<double> taken;
  if (camera.norm() > 0) taken.push_back(line_angle(-camera));
  std::vector<Vector3d> out;
  for (int i = 0; i < count; ++i) {
    Vector3d rel;
    for (int attempt = 0;; ++attempt) {
      const double a = uniform(rng, 0.0, std::numbers::pi);
      const bool ok = std::all_of(taken.begin(), taken.end(),
                                  [&](double t) { return line_gap(a, t) >= min_gap; });
      if (ok || attempt > 200) {
        const double mag = signed_uniform(rng, 0.06, 0.11);
        rel = Vector3d(std::cos(a), std::sin(a), 0.0) * mag;
        taken.push_back(a);
        break;
      }
    }
    out.push_back(camera + rel);
  }
  return out;
}

Vector3d lateral_camera_velocity(std::mt19937_64& rng) {
  const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return Vector3d(std::cos(a), std::sin(a), 0.0) * uniform(rng, 0.06, 0.1);
}

void check_spec(const ScenarioSpec& spec) {
  if (spec.num_objects < 1) throw InvalidSpec("num_objects must be >= 1");
  if (spec.frame_count < 2) throw InvalidSpec("frame_count must be >= 2");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw InvalidSpec("noise_sigma must be finite and >= 0");
  }
  if (spec.width < 32 || spec.height < 32) throw InvalidSpec("image must be at least 32x32");
  if (spec.tracks_per_object < kMinTracksPerObject ||
      spec.background_tracks < kMinTracksPerObject) {
    throw InvalidSpec("tracks_per_object must be >= 16");
  }
  int min_objects = 1;
  switch (spec.name) {
    case Scenario::kEpipolarDegenerate: min_objects = 2; break;
    case Scenario::kParallax: min_objects = 3; break;
    case Scenario::kMultiObject: min_objects = 2; break;
    default: break;
  }
  if (spec.num_objects < min_objects) {
    throw InvalidSpec("scenario " + std::string(to_string(spec.name)) + " needs at least " +
                      std::to_string(min_objects) + " objects");
  }
}

std::pair<CameraModel, std::vector<RigidBody>> build_with_rng(const ScenarioSpec& spec,
                                                              std::mt19937_64& rng) {
  const int frames = spec.frame_count;
  CameraModel cam;
  cam.width = spec.width;
  cam.height = spec.height;
  std::vector<RigidBody> bodies;
  bodies.push_back(make_room(frames));
  const int boxes = spec.num_objects - 1;
  auto next_id = [&] { return static_cast<ObjectId>(bodies.size() + 1); };

  switch (spec.name) {
    case Scenario::kStatic: {
      cam.poses = translating_camera(Vector3d::Zero(), frames);
      for (const auto& [nx, ny] : image_slots(rng, boxes)) {
        bodies.push_back(make_box(rng, next_id(), nx, ny, uniform(rng, 4.5, 7.0),
                                  box_half(rng, 0.25, 0.4), Vector3d::Zero(), frames, 0));
      }
      break;
    }
    case Scenario::kEpipolarDegenerate: {
      // Boxes cycle through three roles: co-moving along the camera's travel
      // direction (stays on the static scene's epipolar lines), co-moving
      // with a vertical component, and static.
      const Vector3d vc(uniform(rng, 0.13, 0.17), 0.0, 0.0);
      cam.poses = translating_camera(vc, frames);
      // The along-track movers sit k times deeper than a typical static box
      // and move k times faster relative to the camera, so their image
      // speeds match the statics'; only depth tells them apart.
      const double k = uniform(rng, 1.4, 1.8);
      const Vector3d v_along = vc * (1.0 - k);
      const Vector3d v_other(uniform(rng, -0.05, 0.05), -uniform(rng, 0.09, 0.13), 0.0);
      // Start ahead of the image drift so boxes stay in view.
      const double drift = vc.x() * (frames - 1) / 5.3;
      const auto slots = image_slots(rng, boxes, std::min(0.5 * drift, 0.12));
      for (int i = 0; i < boxes; ++i) {
        const auto [nx, ny] = slots[static_cast<std::size_t>(i)];
        const int role = i % 3;
        const Vector3d v = role == 0 ? v_along : role == 1 ? v_other : Vector3d::Zero();
        const int group = role == 2 ? 0 : role + 1;
        const double z = uniform(rng, 4.8, 5.8) * (role == 0 ? k : 1.0);
        const Vector3d half = role == 0 ? box_half(rng, 0.35, 0.5) : box_half(rng, 0.25, 0.4);
        bodies.push_back(make_box(rng, next_id(), nx, ny, z, half, v, frames, group));
      }
      break;
    }
    case Scenario::kParallax: {
      // Forward camera motion. Boxes cycle through: slow co-moving movers high
      // in the image, near statics off-center, mid-depth statics low.
      int n_near = 0;
      for (int i = 0; i < boxes; ++i) n_near += i % 3 == 1;
      const double tau = uniform(rng, 0.25, 0.32);
      std::vector<double> near_z;
      for (int i = 0; i < n_near; ++i) near_z.push_back(1.0 + (frames - 1) * tau + uniform(rng, 0.0, 0.2));
      cam.poses = translating_camera(Vector3d(0.0, 0.0, tau), frames);
      const Vector3d v_mover(0.0, -uniform(rng, 0.045, 0.06), 0.0);
      const double side = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
      int movers = 0, nears = 0, fars = 0;
      for (int i = 0; i < boxes; ++i) {
        const int role = i % 3;
        if (role == 0) {
          const double nx = side * (uniform(rng, 0.1, 0.14) + 0.14 * movers);
          const double ny = -uniform(rng, 0.06, 0.1);
          bodies.push_back(make_box(rng, next_id(), nx, ny, uniform(rng, 8.0, 9.5),
                                    box_half(rng, 0.45, 0.6), v_mover, frames, 1));
          ++movers;
        } else if (role == 1) {
          const double sx = (nears / 2) % 2 == 0 ? -side : side;
          const double nx = sx * uniform(rng, 0.07, 0.1);
          const double ny = (nears % 2 == 0 ? 1.0 : -1.0) * uniform(rng, 0.04, 0.06);
          bodies.push_back(make_box(rng, next_id(), nx, ny, near_z[static_cast<std::size_t>(nears)],
                                    box_half(rng, 0.12, 0.15), Vector3d::Zero(), frames, 0));
          ++nears;
        } else {
          const double nx = uniform(rng, -0.04, 0.04) + 0.1 * ((fars + 1) / 2) * (fars % 2 ? 1 : -1);
          const double ny = uniform(rng, 0.1, 0.14);
          bodies.push_back(make_box(rng, next_id(), nx, ny, uniform(rng, 4.2, 5.0),
                                    box_half(rng, 0.25, 0.35), Vector3d::Zero(), frames, 0));
          ++fars;
        }
      }
      break;
    }
    case Scenario::kMultiObject: {
      // Boxes are dealt round-robin into the static group and several
      // co-moving groups with distinct lateral motion directions.
      const Vector3d vc = lateral_camera_velocity(rng);
      cam.poses = translating_camera(vc, frames);
      const int movers = std::max(1, (boxes - 1) / 2);
      const auto vels = separated_velocities(rng, vc, movers, deg(35));
      const auto slots = image_slots(rng, boxes);
      for (int i = 0; i < boxes; ++i) {
        const auto [nx, ny] = slots[static_cast<std::size_t>(i)];
        const int group = (i + 1) % (movers + 1);
        bodies.push_back(make_box(rng, next_id(), nx, ny, uniform(rng, 4.5, 7.0),
                                  box_half(rng, 0.25, 0.4),
                                  group == 0 ? Vector3d::Zero()
                                             : vels[static_cast<std::size_t>(group - 1)],
                                  frames, group));
      }
      break;
    }
    case Scenario::kRandom: {
      const Vector3d vc = lateral_camera_velocity(rng);
      cam.poses = translating_camera(vc, frames);
      const int groups =
          boxes == 0 ? 0 : std::uniform_int_distribution<int>(1, std::min(3, boxes))(rng);
      const auto vels = separated_velocities(rng, vc, groups, deg(30));
      const auto slots = image_slots(rng, boxes);
      for (int i = 0; i < boxes; ++i) {
        const int group =
            i < groups ? i + 1 : std::uniform_int_distribution<int>(0, groups)(rng);
        const auto [nx, ny] = slots[static_cast<std::size_t>(i)];
        bodies.push_back(make_box(rng, next_id(), nx, ny, uniform(rng, 4.5, 7.0),
                                  box_half(rng, 0.25, 0.4),
                                  group == 0 ? Vector3d::Zero()
                                             : vels[static_cast<std::size_t>(group - 1)],
                                  frames, group));
      }
      break;
    }
  }
  return {cam, bodies};
}

struct Rendered {
  LabelMap labels;
  DepthField depth;  // camera-frame z before rescaling
  FlowField flow;
};

Rendered render_frame(const CameraModel& cam, std::span<const RigidBody> bodies, int f) {
  const ImageNormalizer norm = cam.normalizer();
  Rendered r{LabelMap(cam.width, cam.height, kUnassigned), DepthField(cam.width, cam.height),
             FlowField(cam.width, cam.height)};
  const bool has_next = f + 1 < static_cast<int>(cam.poses.size());
  double far = 0.0;
  std::vector<std::size_t> misses;
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const double nx = norm.x(x + 0.5);
      const double ny = norm.y(y + 0.5);
      const auto hit = cast_ray(cam, bodies, f, nx, ny);
      if (!hit) {
        misses.push_back(r.depth.index(x, y));
        continue;
      }
      const RigidBody& body = bodies[hit->body];
      r.labels.at(x, y) = body.id;
      r.depth.at(x, y) = static_cast<float>(hit->depth);
      far = std::max(far, hit->depth);
      if (!has_next) continue;
      const auto& bp = body.poses;
      const auto& cp = cam.poses;
      const auto fi = static_cast<std::size_t>(f);
      if (bp[fi].rotation == bp[fi + 1].rotation && bp[fi].translation == bp[fi + 1].translation &&
          cp[fi].rotation == cp[fi + 1].rotation && cp[fi].translation == cp[fi + 1].translation) {
        continue;  // nothing moved; keep the flow exactly zero
      }
      const Vector3d world = body.poses[static_cast<std::size_t>(f + 1)].apply(hit->local);
      double u = 0.0, v = 0.0;
      try {
        const ProjectedPoint p = project(cam, f + 1, world);
        u = p.x - norm.to_pixel_x(nx);
        v = p.y - norm.to_pixel_y(ny);
      } catch (const BehindCamera&) {
      }
      r.flow.set(x, y, static_cast<float>(u), static_cast<float>(v));
    }
  }
  for (auto idx : misses) r.depth.z[idx] = static_cast<float>(far > 0 ? far : 1.0);
  return r;
}

bool visible(const CameraModel& cam, std::span<const RigidBody> bodies, std::size_t body,
             int f, const Vector3d& local, ProjectedPoint& out) {
  const Vector3d world = bodies[body].poses[static_cast<std::size_t>(f)].apply(local);
  try {
    out = project(cam, f, world);
  } catch (const BehindCamera&) {
    return false;
  }
  if (out.x < 0 || out.y < 0 || out.x >= cam.width || out.y >= cam.height) return false;
  const ImageNormalizer norm = cam.normalizer();
  const auto hit = cast_ray(cam, bodies, f, norm.x(out.x), norm.y(out.y));
  return hit && hit->body == body && std::abs(hit->depth - out.depth) <= 1e-7 * out.depth;
}

// Every object keeps enough mask pixels in every frame and enough tracks
// clear of the border spanning each frame pair a few frames apart.
bool usable(const SceneBundle& b) {
  const int gap = std::min(kUsableGap, b.frame_count - 1);
  auto inside = [&](const TrackPoint& p) {
    return p.x >= kSeedBorder && p.y >= kSeedBorder && p.x <= b.width - kSeedBorder &&
           p.y <= b.height - kSeedBorder;
  };
  for (const auto& obj : b.objects) {
    for (const auto& lm : b.labels) {
      if (std::count(lm.labels.begin(), lm.labels.end(), obj.id) < kMinVisiblePixels) return false;
    }
    for (int m = 0; m + gap < b.frame_count; ++m) {
      int spanning = 0;
      for (const auto& t : b.tracks.tracks) {
        if (t.object_id != obj.id) continue;
        bool first = false, second = false;
        for (const auto& p : t.points) {
          if (p.frame == m && inside(p)) first = true;
          if (p.frame == m + gap && inside(p)) second = true;
        }
        spanning += first && second;
      }
      if (spanning < kMinSpanningTracks) return false;
    }
  }
  return true;
}

}  // namespace

ProjectedPoint project(const CameraModel& camera, int frame, const Eigen::Vector3d& world) {
  const Pose& pose = camera.poses.at(static_cast<std::size_t>(frame));
  const Vector3d pc = pose.inverse_apply(world);
  if (!(pc.z() > 0.0)) {
    throw BehindCamera("point has camera depth " + std::to_string(pc.z()) + " at frame " +
                       std::to_string(frame));
  }
  const ImageNormalizer norm = camera.normalizer();
  return {norm.to_pixel_x(camera.focal * pc.x() / pc.z()),
          norm.to_pixel_y(camera.focal * pc.y() / pc.z()), pc.z()};
}

Eigen::Vector3d back_project(const CameraModel& camera, int frame, double x, double y,
                             double depth) {
  const ImageNormalizer norm = camera.normalizer();
  const Vector3d pc(norm.x(x) / camera.focal * depth, norm.y(y) / camera.focal * depth, depth);
  return camera.poses.at(static_cast<std::size_t>(frame)).apply(pc);
}

std::vector<Facet> box_facets(const Eigen::Vector3d& half_extents) {
  std::vector<Facet> out;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    for (double s : {1.0, -1.0}) {
      Facet f;
      f.normal = Vector3d::Unit(a) * s;
      f.center = f.normal * half_extents[a];
      f.axis_u = Vector3d::Unit(b);
      f.axis_v = Vector3d::Unit(c);
      f.half_u = half_extents[b];
      f.half_v = half_extents[c];
      out.push_back(f);
    }
  }
  return out;
}

std::optional<RayHit> cast_ray(const CameraModel& camera, std::span<const RigidBody> bodies,
                               int frame, double nx, double ny) {
  const Pose& cp = camera.poses.at(static_cast<std::size_t>(frame));
  const Vector3d origin = cp.translation;
  const Vector3d dir = cp.rotation * Vector3d(nx / camera.focal, ny / camera.focal, 1.0);
  std::optional<RayHit> best;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const Pose& bp = bodies[i].poses.at(static_cast<std::size_t>(frame));
    const Vector3d o = bp.inverse_apply(origin);
    const Vector3d d = bp.rotation.transpose() * dir;
    for (const Facet& f : bodies[i].facets) {
      const double denom = f.normal.dot(d);
      if (std::abs(denom) < 1e-15) continue;
      const double t = f.normal.dot(f.center - o) / denom;
      if (!(t > 1e-9)) continue;
      if (best && t >= best->depth) continue;
      const Vector3d q = o + t * d;
      const Vector3d rel = q - f.center;
      if (std::abs(rel.dot(f.axis_u)) > f.half_u || std::abs(rel.dot(f.axis_v)) > f.half_v) {
        continue;
      }
      best = RayHit{i, t, q};
    }
  }
  return best;
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kParallax: return "parallax";
    case Scenario::kEpipolarDegenerate: return "epipolar_degenerate";
    case Scenario::kMultiObject: return "multi_object";
    case Scenario::kStatic: return "static";
    case Scenario::kRandom: return "random";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::kParallax, Scenario::kEpipolarDegenerate, Scenario::kMultiObject,
                     Scenario::kStatic, Scenario::kRandom}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidSpec("unknown scenario '" + std::string(name) + "'");
}

int default_object_count(Scenario s) {
  switch (s) {
    case Scenario::kParallax: return 6;
    case Scenario::kEpipolarDegenerate: return 7;
    case Scenario::kMultiObject: return 7;
    case Scenario::kStatic: return 4;
    case Scenario::kRandom: return 6;
  }
  return 5;
}

std::pair<CameraModel, std::vector<RigidBody>> build_scenario(const ScenarioSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(mix_seed(spec.seed, 0, 0, 1));
  return build_with_rng(spec, rng);
}

SyntheticScene render_scene(const CameraModel& camera, std::vector<RigidBody> bodies,
                            const ScenarioSpec& spec) {
  check_spec(spec);
  const int frames = spec.frame_count;
  const ImageNormalizer norm = camera.normalizer();
  SyntheticScene scene;
  scene.camera = camera;
  SceneBundle& b = scene.bundle;
  b.width = camera.width;
  b.height = camera.height;
  b.frame_count = frames;
  std::set<int> groups;
  for (const auto& body : bodies) {
    b.objects.push_back({body.id, body.name, body.is_background});
    scene.truth.motion_group[body.id] = body.motion_group;
    groups.insert(body.motion_group);
  }
  b.num_motions = static_cast<int>(groups.size());

  for (int f = 0; f < frames; ++f) {
    Rendered r = render_frame(camera, bodies, f);
    double sum = 0.0;
    for (float z : r.depth.z) sum += z;
    const double mean = sum / static_cast<double>(r.depth.z.size());
    for (float& z : r.depth.z) z = static_cast<float>(z / mean);
    if (f + 1 < frames && spec.noise_sigma > 0) {
      std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(f), 0, 11));
      std::normal_distribution<double> noise(0.0, spec.noise_sigma);
      for (float& c : r.flow.uv) c = static_cast<float>(c + noise(rng));
    }
    b.labels.push_back(std::move(r.labels));
    b.depth.push_back(std::move(r.depth));
    if (f + 1 < frames) b.flow.push_back(std::move(r.flow));
  }

  // Tracks: surface points sampled from each object's frame-0 mask, emitted
  // wherever they are visible.
  int next_track = 0;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const ObjectId id = bodies[i].id;
    const LabelMap& mask = b.labels.front();
    std::vector<std::pair<int, int>> pixels;
    for (int y = 0; y < mask.height; ++y) {
      for (int x = 0; x < mask.width; ++x) {
        if (mask.at(x, y) != id) continue;
        if (x < kSeedBorder || y < kSeedBorder || x + 1 > mask.width - kSeedBorder ||
            y + 1 > mask.height - kSeedBorder) {
          continue;
        }
        pixels.emplace_back(x, y);
      }
    }
    std::mt19937_64 rng(mix_seed(spec.seed, id, 0, 13));
    std::shuffle(pixels.begin(), pixels.end(), rng);
    std::vector<Track> object_tracks;
    for (const auto& [x, y] : pixels) {
      const int wanted = bodies[i].is_background ? spec.background_tracks : spec.tracks_per_object;
      if (static_cast<int>(object_tracks.size()) >= wanted) break;
      const double px = x + uniform(rng, 0.05, 0.95);
      const double py = y + uniform(rng, 0.05, 0.95);
      const auto hit = cast_ray(camera, bodies, 0, norm.x(px), norm.y(py));
      if (!hit || hit->body != i) continue;
      Track t;
      t.object_id = id;
      for (int f = 0; f < frames; ++f) {
        ProjectedPoint p;
        if (visible(camera, bodies, i, f, hit->local, p)) t.points.push_back({f, p.x, p.y});
      }
      if (!t.points.empty()) object_tracks.push_back(std::move(t));
    }
    if (spec.noise_sigma > 0) {
      for (int f = 0; f < frames; ++f) {
        std::mt19937_64 nrng(mix_seed(spec.seed, id, static_cast<std::uint64_t>(f), 12));
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (auto& t : object_tracks) {
          for (auto& p : t.points) {
            if (p.frame != f) continue;
            p.x += noise(nrng);
            p.y += noise(nrng);
          }
        }
      }
    }
    for (auto& t : object_tracks) {
      t.track_id = next_track++;
      b.tracks.tracks.push_back(std::move(t));
    }
  }
  scene.bodies = std::move(bodies);
  return scene;
}

SyntheticScene generate_scene(const ScenarioSpec& spec) {
  check_spec(spec);
  for (int attempt = 0; attempt < kMaxLayoutAttempts; ++attempt) {
    std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(attempt), 0, 1));
    auto [cam, bodies] = build_with_rng(spec, rng);
    SyntheticScene scene = render_scene(cam, std::move(bodies), spec);
    if (usable(scene.bundle)) return scene;
  }
  throw InvalidSpec("could not lay out a scene where every object stays visible");
}

}  // namespace motionfuse
