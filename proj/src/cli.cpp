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

#include "motionfuse/cli.hpp"

#include <optional>
#include <string>

#include "CLI11.hpp"
#include "motionfuse/errors.hpp"
#include "motionfuse/eval.hpp"
#include "motionfuse/io.hpp"
#include "motionfuse/segment.hpp"
#include "motionfuse/synth.hpp"

namespace motionfuse {
namespace {

struct SegmentArgs {
  std::string scene;
  std::string views = "traj,flow";
  std::uint64_t seed = 0;
  std::string out;
  std::optional<int> ork_t;
  std::optional<double> lambda;
  std::optional<int> frame_gap;
  std::optional<int> iters;
  bool dump = false;
};

struct SynthArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  int objects = 0;
  int frames = 8;
  double noise = 0.0;
  std::string out;
};

void print_violations(const std::vector<Violation>& violations, std::ostream& os) {
  for (const auto& v : violations) {
    os << v.field;
    if (v.frame >= 0) os << " [frame " << v.frame << "]";
    os << ": " << v.detail << "\n";
  }
}

int run_segment(const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  ViewSet views;
  EngineConfig cfg;
  try {
    views = ViewSet::parse(a.views);
    cfg.seed = a.seed;
    cfg.ork_t = a.ork_t;
    if (a.lambda) cfg.lambda = *a.lambda;
    if (a.frame_gap) cfg.frame_gap_traj = *a.frame_gap;
    if (a.iters) cfg.coreg_iters = *a.iters;
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "segment: " << e.what() << "\n";
    return kExitUsage;
  }
  const SceneBundle bundle = read_bundle(a.scene);
  if (const auto v = validate_bundle(bundle); !v.empty()) {
    err << "segment: " << a.scene << " is not a valid scene bundle\n";
    print_violations(v, err);
    return kExitDataError;
  }
  const SegmentResult result = segment_scene(bundle, cfg, views, a.dump);
  write_segment_output(bundle, result, cfg, views, a.out);
  if (a.dump) write_segment_debug(result, a.out);
  out << "segmented " << bundle.objects.size() << " objects into " << bundle.num_motions
      << " motions -> " << a.out << "\n";
  return kExitOk;
}

int run_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec;
  try {
    spec.name = parse_scenario(a.scenario);
  } catch (const InvalidSpec& e) {
    err << "synth: " << e.what() << "\n";
    return kExitUsage;
  }
  spec.seed = a.seed;
  spec.num_objects = a.objects > 0 ? a.objects : default_object_count(spec.name);
  spec.frame_count = a.frames;
  spec.noise_sigma = a.noise;
  const SyntheticScene scene = generate_scene(spec);
  write_bundle(scene.bundle, a.out);
  write_ground_truth(scene.truth, fs::path(a.out) / "ground_truth.json");
  out << "wrote " << to_string(spec.name) << " scene with " << scene.bundle.objects.size()
      << " objects and " << scene.bundle.num_motions << " motions -> " << a.out << "\n";
  return kExitOk;
}

int run_eval(const std::string& pred, const std::string& gt, std::ostream& out) {
  const auto p = read_instance_maps(pred);
  const auto g = read_instance_maps(gt);
  out << to_json(evaluate(p, g));
  return kExitOk;
}

int run_validate(const std::string& scene, std::ostream& out, std::ostream& err) {
  const SceneBundle bundle = read_bundle(scene);
  const auto v = validate_bundle(bundle);
  if (v.empty()) {
    out << scene << ": ok\n";
    return kExitOk;
  }
  print_violations(v, err);
  err << scene << ": " << v.size() << " violation(s)\n";
  return kExitDataError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view motion segmentation from trajectories, flow and depth", "motionfuse"};
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Cluster a scene's objects into rigid motions");
  segment->add_option("--scene", seg.scene, "Scene bundle directory")->required();
  segment->add_option("--views", seg.views, "traj,flow | traj | flow")->capture_default_str();
  segment->add_option("--seed", seg.seed, "Random seed")->capture_default_str();
  segment->add_option("--out", seg.out, "Output directory")->required();
  segment->add_option("--ork-t", seg.ork_t, "Ordered residual kernel width");
  segment->add_option("--lambda", seg.lambda, "Co-regularization weight");
  segment->add_option("--frame-gap", seg.frame_gap, "Frame gap for fundamental matrices");
  segment->add_option("--iters", seg.iters, "Co-regularization iterations");
  segment->add_flag("--dump", seg.dump, "Also write per-frame residuals and scores");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene bundle");
  synth->add_option("--scenario", syn.scenario,
                    "parallax | epipolar_degenerate | multi_object | static | random")
      ->required();
  synth->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  synth->add_option("--objects", syn.objects, "Objects including the background")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--frames", syn.frames, "Frame count")->capture_default_str();
  synth->add_option("--noise", syn.noise, "Noise sigma in pixels")->capture_default_str();
  synth->add_option("--out", syn.out, "Output directory")->required();

  std::string pred, gt;
  auto* eval = app.add_subcommand("eval", "Score moving-instance maps against ground truth");
  eval->add_option("--pred", pred, "Segment output directory")->required();
  eval->add_option("--gt", gt, "Scene bundle with ground_truth.json")->required();

  std::string scene;
  auto* validate = app.add_subcommand("validate", "Check a scene bundle's invariants");
  validate->add_option("--scene", scene, "Scene bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*segment) return run_segment(seg, out, err);
    if (*synth) return run_synth(syn, out, err);
    if (*eval) return run_eval(pred, gt, out);
    if (*validate) return run_validate(scene, out, err);
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace motionfuse
