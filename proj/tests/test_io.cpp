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

#include <cstring>
#include <fstream>
#include <regex>
#include <string>

#include "doctest.h"
#include "motionfuse/errors.hpp"
#include "motionfuse/io.hpp"
#include "motionfuse/synth.hpp"
#include "motionfuse/tracks.hpp"
#include "tempdir.hpp"

using namespace motionfuse;
using testing_support::file_bytes;
using testing_support::same_tree;
using testing_support::TempDir;

namespace {

SyntheticScene small_scene(Scenario name, std::uint64_t seed, double noise = 0.0) {
  ScenarioSpec spec;
  spec.name = name;
  spec.seed = seed;
  spec.num_objects = default_object_count(name);
  spec.frame_count = 4;
  spec.width = 96;
  spec.height = 72;
  spec.tracks_per_object = 16;
  spec.background_tracks = 40;
  spec.noise_sigma = noise;
  return generate_scene(spec);
}

std::string what_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("binary writers emit the documented little-endian layout") {
  TempDir dir("layout");
  LabelMap labels(2, 1);
  labels.at(0, 0) = 1;
  labels.at(1, 0) = 0x0203;
  write_label_map(labels, dir / "a.mseg");
  const std::vector<char> expected = {'M', 'S', 'E', 'G', 2, 0, 0, 0, 1, 0, 0, 0, 1, 0, 3, 2};
  CHECK(file_bytes(dir / "a.mseg") == expected);

  FlowField flow(1, 1);
  flow.set(0, 0, 1.0f, -2.0f);
  write_flow(flow, dir / "a.mflo");
  const auto bytes = file_bytes(dir / "a.mflo");
  REQUIRE(bytes.size() == 12 + 8);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "MFLO");
  float uv[2];
  std::memcpy(uv, bytes.data() + 12, 8);
  CHECK(uv[0] == 1.0f);
  CHECK(uv[1] == -2.0f);

  DepthField depth(3, 2, 0.5f);
  write_depth(depth, dir / "a.mdep");
  CHECK(file_bytes(dir / "a.mdep").size() == 12 + 4 * 6);
}

TEST_CASE("binary formats round-trip exactly") {
  TempDir dir("binary");
  const auto scene = small_scene(Scenario::kMultiObject, 3, 0.5);
  const auto& b = scene.bundle;

  write_flow(b.flow[0], dir / "f.mflo");
  write_depth(b.depth[1], dir / "d.mdep");
  write_label_map(b.labels[2], dir / "l.mseg");
  CHECK(read_flow(dir / "f.mflo") == b.flow[0]);
  CHECK(read_depth(dir / "d.mdep") == b.depth[1]);
  CHECK(read_label_map(dir / "l.mseg") == b.labels[2]);

  write_flow(read_flow(dir / "f.mflo"), dir / "f2.mflo");
  write_depth(read_depth(dir / "d.mdep"), dir / "d2.mdep");
  write_label_map(read_label_map(dir / "l.mseg"), dir / "l2.mseg");
  CHECK(file_bytes(dir / "f.mflo") == file_bytes(dir / "f2.mflo"));
  CHECK(file_bytes(dir / "d.mdep") == file_bytes(dir / "d2.mdep"));
  CHECK(file_bytes(dir / "l.mseg") == file_bytes(dir / "l2.mseg"));
}

TEST_CASE("truncated or mislabeled binaries raise FormatError") {
  TempDir dir("trunc");
  FlowField flow(10, 4);
  const auto path = dir / "short.mflo";
  write_flow(flow, path);
  std::filesystem::resize_file(path, 12 + 10 * 4 * 8 - 3);

  CHECK_THROWS_AS(read_flow(path), FormatError);
  const std::string msg = what_of([&] { read_flow(path); });
  CHECK(msg.find(path.string()) != std::string::npos);
  CHECK(msg.find("expected 332 bytes") != std::string::npos);

  // A valid depth file is not a flow file.
  write_depth(DepthField(2, 2), dir / "x.mdep");
  CHECK_THROWS_AS(read_flow(dir / "x.mdep"), FormatError);
  CHECK(what_of([&] { read_flow(dir / "x.mdep"); }).find("magic") != std::string::npos);

  // Extra trailing bytes are rejected too.
  write_label_map(LabelMap(3, 3, 1), dir / "long.mseg");
  {
    std::ofstream os(dir / "long.mseg", std::ios::binary | std::ios::app);
    os.put('\0');
  }
  CHECK_THROWS_AS(read_label_map(dir / "long.mseg"), FormatError);

  testing_support::write_file(dir / "tiny.mdep", "MD");
  CHECK_THROWS_AS(read_depth(dir / "tiny.mdep"), FormatError);
  CHECK_THROWS_AS(read_depth(dir / "absent.mdep"), FormatError);
}

TEST_CASE("bundle read then write reproduces the directory byte for byte") {
  for (auto name : {Scenario::kMultiObject, Scenario::kParallax, Scenario::kStatic}) {
    CAPTURE(to_string(name));
    TempDir a("bundle_a"), b("bundle_b");
    const auto scene = small_scene(name, 11, 0.5);
    write_bundle(scene.bundle, a.path());
    const SceneBundle loaded = read_bundle(a.path());
    CHECK(loaded == scene.bundle);
    write_bundle(loaded, b.path());
    CHECK(same_tree(a.path(), b.path()));
  }
}

TEST_CASE("manifest problems raise ManifestError") {
  TempDir root("manifest");
  const auto scene = small_scene(Scenario::kMultiObject, 5);
  const auto dir = root / "scene";
  write_bundle(scene.bundle, dir);
  const auto manifest = dir / "manifest.json";
  const auto original = file_bytes(manifest);
  const std::string text(original.begin(), original.end());

  SUBCASE("num_motions = 0") {
    const std::string edited =
        std::regex_replace(text, std::regex("\"num_motions\": [0-9]+"), "\"num_motions\": 0");
    REQUIRE(edited != text);
    testing_support::write_file(manifest, edited);
    CHECK_THROWS_AS(read_bundle(dir), ManifestError);
  }
  SUBCASE("missing directory") {
    const auto missing = root / "nowhere";
    CHECK_THROWS_AS(read_bundle(missing), ManifestError);
    CHECK(what_of([&] { read_bundle(missing); }).find(missing.string()) != std::string::npos);
  }
  SUBCASE("missing per-frame file") {
    std::filesystem::remove(dir / "depth" / "0002.mdep");
    CHECK_THROWS_AS(read_bundle(dir), ManifestError);
  }
  SUBCASE("undeclared label id") {
    LabelMap labels = scene.bundle.labels[1];
    labels.at(0, 0) = 999;
    write_label_map(labels, dir / "labels" / "0001.mseg");
    CHECK_THROWS_AS(read_bundle(dir), ManifestError);
  }
  SUBCASE("malformed JSON") {
    testing_support::write_file(manifest, "{ not json");
    CHECK_THROWS_AS(read_bundle(dir), ManifestError);
  }
  SUBCASE("corrupt flow payload") {
    std::filesystem::resize_file(dir / "flow" / "0000.mflo", 20);
    CHECK_THROWS_AS(read_bundle(dir), FormatError);
  }
}

TEST_CASE("tracks and ground truth JSON round-trip") {
  const auto scene = small_scene(Scenario::kMultiObject, 8, 0.5);
  const std::string text = tracks_to_json(scene.bundle.tracks);
  const TrackSet back = tracks_from_json(text, "mem");
  CHECK(back == scene.bundle.tracks);
  CHECK(tracks_to_json(back) == text);
  CHECK_THROWS_AS(tracks_from_json("[1, 2", "mem"), ManifestError);

  TempDir dir("truth");
  write_ground_truth(scene.truth, dir / "gt.json");
  CHECK(read_ground_truth(dir / "gt.json") == scene.truth);
  testing_support::write_file(dir / "bad.json", "{\"0\": 1}");
  CHECK_THROWS_AS(read_ground_truth(dir / "bad.json"), ManifestError);
}

TEST_CASE("ground-truth instance maps carry motion groups") {
  const auto scene = small_scene(Scenario::kMultiObject, 2);
  const auto maps = ground_truth_instance_maps(scene.bundle, scene.truth);
  REQUIRE(maps.size() == static_cast<std::size_t>(scene.bundle.frame_count));
  for (std::size_t f = 0; f < maps.size(); ++f) {
    const auto& labels = scene.bundle.labels[f];
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
      CHECK(maps[f].labels[i] == scene.truth.motion_group.at(labels.labels[i]));
    }
  }

  TempDir dir("instances");
  write_bundle(scene.bundle, dir.path());
  write_ground_truth(scene.truth, dir / "ground_truth.json");
  CHECK(read_instance_maps(dir.path()) == maps);
}

TEST_CASE("sanitize_tracks drops off-mask and border points") {
  std::vector<LabelMap> masks;
  for (int f = 0; f < 7; ++f) {
    LabelMap m(40, 40, 1);
    for (int y = 10; y < 30; ++y)
      for (int x = 10; x < 30; ++x) m.at(x, y) = 2;
    masks.push_back(m);
  }

  SUBCASE("point drifting off its mask") {
    Track t{7, 2, {}};
    for (int f = 0; f < 7; ++f) t.points.push_back({f, f == 5 ? 33.0 : 15.0 + f, 20.0});
    const TrackSet out = sanitize_tracks(TrackSet{{t}}, masks, 8.0, 2);
    REQUIRE(out.tracks.size() == 1);
    CHECK(out.tracks[0].points.size() == 6);
    for (const auto& p : out.tracks[0].points) CHECK(p.frame != 5);
    CHECK(out.tracks[0].points[4] == t.points[4]);
  }
  SUBCASE("point near the border") {
    Track t{1, 1, {{0, 1.0, 20.0}, {1, 12.0, 5.0}, {2, 31.0, 31.0}}};
    const TrackSet out = sanitize_tracks(TrackSet{{t}}, masks, 8.0, 1);
    REQUIRE(out.tracks.size() == 1);
    REQUIRE(out.tracks[0].points.size() == 1);
    CHECK(out.tracks[0].points[0].frame == 2);
  }
  SUBCASE("tracks left too short are removed whole") {
    Track t{1, 2, {{0, 12.0, 12.0}, {1, 2.0, 12.0}}};
    CHECK(sanitize_tracks(TrackSet{{t}}, masks, 8.0, 2).tracks.empty());
  }
  SUBCASE("frames without a mask drop their points") {
    Track t{1, 2, {{0, 12.0, 12.0}, {9, 12.0, 12.0}}};
    const TrackSet out = sanitize_tracks(TrackSet{{t}}, masks, 8.0, 1);
    REQUIRE(out.tracks.size() == 1);
    CHECK(out.tracks[0].points.size() == 1);
  }
}

TEST_CASE("clean tracks pass sanitation unchanged") {
  // A static camera over a static scene never moves a track off its mask.
  const auto still = small_scene(Scenario::kStatic, 21);
  CHECK(sanitize_tracks(still.bundle.tracks, still.bundle.labels, 8.0, 2) == still.bundle.tracks);

  // Moving scenes: keep only tracks whose every point is clean, then no rule
  // may fire.
  const auto scene = small_scene(Scenario::kMultiObject, 21);
  const auto& b = scene.bundle;
  TrackSet clean;
  for (const auto& t : b.tracks.tracks) {
    bool ok = t.points.size() >= 2;
    for (const auto& p : t.points) {
      const int x = static_cast<int>(p.x), y = static_cast<int>(p.y);
      ok = ok && p.x >= 8 && p.y >= 8 && p.x <= b.width - 8 && p.y <= b.height - 8 &&
           b.labels[static_cast<std::size_t>(p.frame)].at(x, y) == t.object_id;
    }
    if (ok) clean.tracks.push_back(t);
  }
  REQUIRE(clean.tracks.size() > b.tracks.tracks.size() / 2);
  CHECK(sanitize_tracks(clean, b.labels, 8.0, 2) == clean);
}
