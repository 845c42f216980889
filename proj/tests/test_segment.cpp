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

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "motionfuse/errors.hpp"
#include "motionfuse/eval.hpp"
#include "motionfuse/io.hpp"
#include "motionfuse/segment.hpp"
#include "motionfuse/synth.hpp"

using namespace motionfuse;

namespace {

SyntheticScene scene_for(Scenario name, std::uint64_t seed, int objects = 0, double noise = 0.5) {
  ScenarioSpec spec;
  spec.name = name;
  spec.seed = seed;
  spec.num_objects = objects > 0 ? objects : default_object_count(name);
  spec.noise_sigma = noise;
  return generate_scene(spec);
}

std::vector<int> truth_of(const SyntheticScene& s) {
  std::vector<int> out;
  for (const auto& o : s.bundle.objects) out.push_back(s.truth.motion_group.at(o.id));
  return out;
}

double accuracy(const SyntheticScene& s, const char* views, std::uint64_t seed = 1) {
  EngineConfig cfg;
  cfg.seed = seed;
  const auto r = segment_scene(s.bundle, cfg, ViewSet::parse(views));
  return object_label_accuracy(r.assignment.labels, truth_of(s));
}

}  // namespace

TEST_CASE("view sets parse and print") {
  CHECK(ViewSet::parse("traj,flow").trajectory);
  CHECK(ViewSet::parse("traj,flow").flow);
  CHECK_FALSE(ViewSet::parse("traj").flow);
  CHECK_FALSE(ViewSet::parse("flow").trajectory);
  CHECK(ViewSet::parse("trajectory").trajectory);
  CHECK(ViewSet::parse("flow,traj").to_string() == "traj,flow");
  CHECK_THROWS_AS(ViewSet::parse("depth"), ConfigError);
  CHECK_THROWS_AS(ViewSet::parse(""), ConfigError);
}

TEST_CASE("a static scene with one motion is a single static cluster") {
  const auto s = scene_for(Scenario::kStatic, 1, 0, 0.0);
  REQUIRE(s.bundle.num_motions == 1);
  EngineConfig cfg;
  const auto r = segment_scene(s.bundle, cfg, ViewSet{});
  for (int label : r.assignment.labels) CHECK(label == 0);
  for (bool m : r.assignment.moving) CHECK_FALSE(m);
  for (const auto& map : r.label_maps)
    CHECK(std::all_of(map.labels.begin(), map.labels.end(), [](auto l) { return l == 0; }));
}

TEST_CASE("in-plane movers fool trajectories but not flow") {
  const auto s = scene_for(Scenario::kEpipolarDegenerate, 100);
  const auto truth = truth_of(s);
  EngineConfig cfg;
  cfg.seed = 1;
  const auto traj = segment_scene(s.bundle, cfg, ViewSet::parse("traj"));
  CHECK(object_label_accuracy(traj.assignment.labels, truth) < 1.0);
  // Some truly moving object ends up in the background's cluster.
  bool hidden = false;
  for (std::size_t i = 0; i < truth.size(); ++i) hidden |= truth[i] != 0 && !traj.assignment.moving[i];
  CHECK(hidden);

  CHECK(accuracy(s, "flow") == 1.0);
  CHECK(accuracy(s, "traj,flow") == 1.0);
}

TEST_CASE("depth parallax splits static objects under flow alone") {
  const auto s = scene_for(Scenario::kParallax, 100);
  const auto truth = truth_of(s);
  EngineConfig cfg;
  cfg.seed = 1;
  const auto flow = segment_scene(s.bundle, cfg, ViewSet::parse("flow"));
  CHECK(object_label_accuracy(flow.assignment.labels, truth) < 1.0);
  // Some static object is flagged as moving.
  bool split = false;
  for (std::size_t i = 0; i < truth.size(); ++i) split |= truth[i] == 0 && flow.assignment.moving[i];
  CHECK(split);

  const auto fused = segment_scene(s.bundle, cfg, ViewSet::parse("traj,flow"));
  CHECK(object_label_accuracy(fused.assignment.labels, truth) == 1.0);
  for (std::size_t i = 0; i < truth.size(); ++i) CHECK(fused.assignment.moving[i] == (truth[i] != 0));
}

TEST_CASE("multi-object scenes segment end to end") {
  for (auto [seed, objects] : {std::pair{100, 5}, std::pair{101, 7}, std::pair{103, 7}}) {
    CAPTURE(seed);
    const auto s = scene_for(Scenario::kMultiObject, static_cast<std::uint64_t>(seed), objects);
    REQUIRE(s.bundle.num_motions >= 2);
    EngineConfig cfg;
    cfg.seed = 1;
    const auto r = segment_scene(s.bundle, cfg, ViewSet{});
    CHECK(object_label_accuracy(r.assignment.labels, truth_of(s)) == 1.0);

    const auto gt = ground_truth_instance_maps(s.bundle, s.truth);
    const auto report = evaluate(r.label_maps, gt);
    CHECK(report.fu == 1.0);
  }
}

TEST_CASE("results are deterministic for a fixed seed") {
  const auto s = scene_for(Scenario::kMultiObject, 104);
  EngineConfig cfg;
  cfg.seed = 9;
  const auto a = segment_scene(s.bundle, cfg, ViewSet{}, true);
  const auto b = segment_scene(s.bundle, cfg, ViewSet{}, true);
  CHECK(a.assignment == b.assignment);
  CHECK(a.label_maps == b.label_maps);
  REQUIRE(a.traj_affinity);
  REQUIRE(a.flow_affinity);
  CHECK(a.traj_affinity->a == b.traj_affinity->a);
  CHECK(a.flow_affinity->a == b.flow_affinity->a);
  REQUIRE(a.traj_debug);
  CHECK(a.traj_debug->residuals.size() == b.traj_debug->residuals.size());
}

TEST_CASE("label maps follow the assignment") {
  const auto s = scene_for(Scenario::kMultiObject, 101);
  EngineConfig cfg;
  const auto r = segment_scene(s.bundle, cfg, ViewSet{});
  REQUIRE(r.label_maps.size() == s.bundle.labels.size());
  for (std::size_t f = 0; f < r.label_maps.size(); ++f) {
    for (std::size_t p = 0; p < r.label_maps[f].labels.size(); ++p) {
      const auto idx = *s.bundle.object_index(s.bundle.labels[f].labels[p]);
      const bool moving = r.assignment.moving[idx];
      CHECK((r.label_maps[f].labels[p] != 0) == moving);
    }
  }
}

TEST_CASE("segment_scene rejects bad input") {
  const auto s = scene_for(Scenario::kMultiObject, 103);
  EngineConfig cfg;

  SUBCASE("invalid bundle") {
    SceneBundle b = s.bundle;
    b.depth[2].at(3, 3) = 0.0f;
    CHECK_THROWS_AS(segment_scene(b, cfg, ViewSet{}), InvalidBundle);
  }
  SUBCASE("invalid config") {
    cfg.lambda = -1.0;
    CHECK_THROWS_AS(segment_scene(s.bundle, cfg, ViewSet{}), ConfigError);
  }
  SUBCASE("no views") {
    CHECK_THROWS_AS(segment_scene(s.bundle, cfg, ViewSet{false, false}), ConfigError);
  }
  SUBCASE("ork_t above the object count") {
    cfg.ork_t = static_cast<int>(s.bundle.objects.size()) + 1;
    CHECK_THROWS_AS(segment_scene(s.bundle, cfg, ViewSet{}), ConfigError);
  }
  SUBCASE("object without tracks under trajectories alone") {
    SceneBundle b = s.bundle;
    const ObjectId victim = b.objects[2].id;
    std::erase_if(b.tracks.tracks, [&](const Track& t) { return t.object_id == victim; });
    CHECK_THROWS_AS(segment_scene(b, cfg, ViewSet::parse("traj")), NotEnoughEvidence);
    CHECK_NOTHROW(segment_scene(b, cfg, ViewSet{}));
  }
}
