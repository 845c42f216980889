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

// Deterministic synthetic rigid scenes with analytic ground truth.
//
// Bodies are unions of planar rectangular facets (boxes, and a floor + back
// wall for the background) seen by a pinhole camera with focal length 1 in
// normalized units, so normalized image coordinates equal X/Z. Masks, depth
// and flow come from exact ray casting; trajectories are projections of
// surface points fixed in each body's frame.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motionfuse/core.hpp"

namespace motionfuse {

/// Rigid transform from a local frame to the world frame.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Eigen::Vector3d inverse_apply(const Eigen::Vector3d& p) const {
    return rotation.transpose() * (p - translation);
  }
};

/// Camera poses are camera-to-world. Camera axes: x right, y down, z forward.
struct CameraModel {
  double focal = 1.0;  // normalized by max(width, height)
  int width = 320;
  int height = 240;
  std::vector<Pose> poses;

  ImageNormalizer normalizer() const { return {width, height}; }
};

struct ProjectedPoint {
  double x = 0.0;  // pixels
  double y = 0.0;  // pixels
  double depth = 0.0;
};

/// Pinhole projection of a world point at `frame`. Throws BehindCamera when
/// the camera-frame depth is not positive.
ProjectedPoint project(const CameraModel& camera, int frame, const Eigen::Vector3d& world);

/// World point at camera-frame depth `depth` along the ray through pixel (x, y).
Eigen::Vector3d back_project(const CameraModel& camera, int frame, double x, double y,
                             double depth);

/// Rectangle in a body's local frame: points center + s*axis_u + t*axis_v with
/// |s| <= half_u and |t| <= half_v.
struct Facet {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d axis_u = Eigen::Vector3d::UnitX();
  Eigen::Vector3d axis_v = Eigen::Vector3d::UnitY();
  double half_u = 1.0;
  double half_v = 1.0;
};

struct RigidBody {
  ObjectId id = kUnassigned;
  std::string name;
  bool is_background = false;
  std::vector<Facet> facets;  // local frame
  std::vector<Pose> poses;    // local-to-world per frame
  int motion_group = 0;
};

/// Axis-aligned box facets with the given half extents, centered on the origin.
std::vector<Facet> box_facets(const Eigen::Vector3d& half_extents);

struct RayHit {
  std::size_t body = 0;
  double depth = 0.0;            // camera-frame z
  Eigen::Vector3d local;         // hit point in the body's frame
};

/// Front-most body hit by the ray through normalized image point (nx, ny).
std::optional<RayHit> cast_ray(const CameraModel& camera, std::span<const RigidBody> bodies,
                               int frame, double nx, double ny);

enum class Scenario { kParallax, kEpipolarDegenerate, kMultiObject, kStatic, kRandom };

std::string_view to_string(Scenario s);
/// Throws InvalidSpec on an unknown name.
Scenario parse_scenario(std::string_view name);

struct ScenarioSpec {
  Scenario name = Scenario::kMultiObject;
  std::uint64_t seed = 0;
  int num_objects = 5;  // including the background
  int frame_count = 8;
  double noise_sigma = 0.0;  // pixels, on flow and track coordinates
  int width = 320;
  int height = 240;
  int tracks_per_object = 64;
  int background_tracks = 480;
};

/// Default object count used when a caller does not choose one.
int default_object_count(Scenario s);

struct SyntheticScene {
  SceneBundle bundle;
  GroundTruth truth;
  CameraModel camera;
  std::vector<RigidBody> bodies;  // same order as bundle.objects
};

/// Builds the bodies and camera path for a scenario without rendering.
/// Throws InvalidSpec.
std::pair<CameraModel, std::vector<RigidBody>> build_scenario(const ScenarioSpec& spec);

/// Renders masks, relative depth (unit mean per frame), flow and tracks for
/// an already-built scene. Noise is Gaussian with sigma `noise_sigma` pixels
/// on flow and track coordinates only.
SyntheticScene render_scene(const CameraModel& camera, std::vector<RigidBody> bodies,
                            const ScenarioSpec& spec);

/// build_scenario + render_scene. Fully determined by the spec.
SyntheticScene generate_scene(const ScenarioSpec& spec);

}  // namespace motionfuse
