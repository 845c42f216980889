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

#include "motionfuse/segment.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "motionfuse/errors.hpp"
#include "motionfuse/tracks.hpp"

namespace motionfuse {

void EngineConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (frame_gap_traj < 1) fail("frame_gap_traj must be >= 1");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (coreg_iters < 1) fail("coreg_iters must be >= 1");
  if (kmeans_restarts < 1) fail("kmeans_restarts must be >= 1");
  if (min_track_points < 1) fail("min_track_points must be >= 1");
  if (min_track_length < 1) fail("min_track_length must be >= 1");
  if (min_object_pixels < 1) fail("min_object_pixels must be >= 1");
  if (flow_sample_cap < 1) fail("flow_sample_cap must be >= 1");
  if (ork_t && *ork_t < 1) fail("ork_t must be >= 1");
  if (ransac.max_iters < 1) fail("ransac.max_iters must be >= 1");
  if (!(ransac.sampson_inlier_threshold > 0.0)) fail("ransac threshold must be > 0");
  if (!(edge_margin >= 0.0)) fail("edge_margin must be >= 0");
}

ViewSet ViewSet::parse(std::string_view text) {
  ViewSet vs{false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view tok = text.substr(start, comma - start);
    if (tok == "traj" || tok == "trajectory" || tok == "trajs") {
      vs.trajectory = true;
    } else if (tok == "flow") {
      vs.flow = true;
    } else {
      throw ConfigError("unknown view '" + std::string(tok) + "'");
    }
    start = comma + 1;
  }
  return vs;
}

std::string ViewSet::to_string() const {
  if (trajectory && flow) return "traj,flow";
  if (trajectory) return "traj";
  if (flow) return "flow";
  return "";
}

std::vector<std::vector<Correspondence>> object_correspondences(const SceneBundle& bundle,
                                                                int m, int gap) {
  const ImageNormalizer norm(bundle.width, bundle.height);
  std::vector<std::vector<Correspondence>> out(bundle.objects.size());
  for (const auto& t : bundle.tracks.tracks) {
    const auto obj = bundle.object_index(t.object_id);
    if (!obj) continue;
    const TrackPoint* a = nullptr;
    const TrackPoint* b = nullptr;
    for (const auto& p : t.points) {
      if (p.frame == m) a = &p;
      if (p.frame == m + gap) b = &p;
    }
    if (!a || !b) continue;
    out[*obj].push_back({Eigen::Vector3d(norm.x(a->x), norm.y(a->y), 1.0),
                         Eigen::Vector3d(norm.x(b->x), norm.y(b->y), 1.0)});
  }
  return out;
}

std::vector<std::vector<FlowSample>> object_flow_samples(const SceneBundle& bundle, int m,
                                                         const EngineConfig& cfg) {
  const ImageNormalizer norm(bundle.width, bundle.height);
  const LabelMap& mask = bundle.labels[static_cast<std::size_t>(m)];
  const FlowField& flow = bundle.flow[static_cast<std::size_t>(m)];
  const DepthField& depth = bundle.depth[static_cast<std::size_t>(m)];

  std::map<ObjectId, std::size_t> slot;
  for (std::size_t i = 0; i < bundle.objects.size(); ++i) slot[bundle.objects[i].id] = i;

  std::vector<std::vector<FlowSample>> all(bundle.objects.size());
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const auto it = slot.find(mask.at(x, y));
      if (it == slot.end()) continue;
      all[it->second].push_back({norm.x(x + 0.5), norm.y(y + 0.5),
                                 inverse_depth(depth.at(x, y)),
                                 norm.delta(flow.u(x, y)), norm.delta(flow.v(x, y))});
    }
  }
  std::vector<std::vector<FlowSample>> out(bundle.objects.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (static_cast<int>(all[i].size()) < cfg.min_object_pixels) continue;
    out[i] = subsample_flow(all[i], static_cast<std::size_t>(cfg.flow_sample_cap),
                            mix_seed(cfg.seed, bundle.objects[i].id,
                                     static_cast<std::uint64_t>(m), 2));
  }
  return out;
}

namespace {

struct ViewEvidence {
  std::vector<ScoreMatrix> scores;
  ViewDebug debug;
  std::vector<bool> has_model;  // per object: some frame pair had a valid row
};

ViewEvidence trajectory_view(const SceneBundle& bundle, const EngineConfig& cfg, int t,
                             bool keep_debug) {
  const std::size_t k = bundle.objects.size();
  const int gap = std::min(cfg.frame_gap_traj, bundle.frame_count - 1);
  ViewEvidence ev;
  ev.has_model.assign(k, false);
  for (int m = 0; m + gap < bundle.frame_count; ++m) {
    const auto corrs = object_correspondences(bundle, m, gap);
    std::vector<std::optional<FundamentalMatrix>> models(k);
    for (std::size_t i = 0; i < k; ++i) {
      RansacConfig rc = cfg.ransac;
      rc.rng_seed = mix_seed(cfg.seed, bundle.objects[i].id, static_cast<std::uint64_t>(m), 1);
      models[i] = ransac_fit_fundamental(corrs[i], rc).model;
    }
    ResidualMatrix r =
        residual_matrix_traj(models, corrs, static_cast<std::size_t>(cfg.min_track_points));
    r.frame = m;
    for (std::size_t i = 0; i < k; ++i) {
      if (r.row_valid(static_cast<Eigen::Index>(i))) ev.has_model[i] = true;
    }
    ev.scores.push_back(ork_scores(r, t));
    if (keep_debug) ev.debug.residuals.push_back(std::move(r));
  }
  if (keep_debug) ev.debug.scores = ev.scores;
  return ev;
}

ViewEvidence flow_view(const SceneBundle& bundle, const EngineConfig& cfg, int t,
                       bool keep_debug) {
  const std::size_t k = bundle.objects.size();
  ViewEvidence ev;
  ev.has_model.assign(k, false);
  for (int m = 0; m + 1 < bundle.frame_count; ++m) {
    const auto samples = object_flow_samples(bundle, m, cfg);
    std::vector<std::optional<FlowDepthModel>> models(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (samples[i].size() >= 4) models[i] = fit_flow_depth_model(samples[i]);
    }
    ResidualMatrix r = residual_matrix_flow(models, samples, 4);
    r.frame = m;
    for (std::size_t i = 0; i < k; ++i) {
      if (r.row_valid(static_cast<Eigen::Index>(i))) ev.has_model[i] = true;
    }
    ev.scores.push_back(ork_scores(r, t));
    if (keep_debug) ev.debug.residuals.push_back(std::move(r));
  }
  if (keep_debug) ev.debug.scores = ev.scores;
  return ev;
}

std::vector<LabelMap> cluster_label_maps(const SceneBundle& bundle,
                                         const ClusterAssignment& assignment,
                                         std::size_t background) {
  // Moving clusters are numbered 1.. in label order; the background's
  // cluster maps to 0.
  const int bg_label = assignment.labels[background];
  std::map<ObjectId, std::uint16_t> value;
  for (std::size_t i = 0; i < bundle.objects.size(); ++i) {
    const int l = assignment.labels[i];
    value[bundle.objects[i].id] =
        l == bg_label ? 0 : static_cast<std::uint16_t>(l < bg_label ? l + 1 : l);
  }
  std::vector<LabelMap> maps;
  maps.reserve(bundle.labels.size());
  for (const auto& lm : bundle.labels) {
    LabelMap out(lm.width, lm.height, 0);
    for (std::size_t p = 0; p < lm.labels.size(); ++p) {
      const auto it = value.find(lm.labels[p]);
      out.labels[p] = it == value.end() ? 0 : it->second;
    }
    maps.push_back(std::move(out));
  }
  return maps;
}

}  // namespace

SegmentResult segment_scene(const SceneBundle& bundle, const EngineConfig& cfg,
                            ViewSet views, bool keep_debug) {
  cfg.validate();
  if (views.empty()) throw ConfigError("at least one view is required");
  if (const auto violations = validate_bundle(bundle); !violations.empty()) {
    const auto& v = violations.front();
    throw InvalidBundle("bundle violates " + v.field + ": " + v.detail + " (" +
                        std::to_string(violations.size()) + " violation(s))");
  }
  const std::size_t background = *bundle.background_index();
  const auto k = static_cast<Eigen::Index>(bundle.objects.size());
  const int t = cfg.ork_t.value_or(default_ork_t(k));
  if (t > k) throw ConfigError("ork_t exceeds the number of objects");

  SceneBundle clean = bundle;
  clean.tracks = sanitize_tracks(bundle.tracks, bundle.labels, cfg.edge_margin,
                                 cfg.min_track_length);

  SegmentResult result;
  result.ork_t = t;
  std::vector<bool> evidence(static_cast<std::size_t>(k), false);
  std::optional<ViewLaplacian> l_traj, l_flow;

  auto absorb = [&](ViewEvidence& ev, std::optional<AffinityMatrix>& aff,
                    std::optional<ViewDebug>& dbg, std::optional<ViewLaplacian>& lap) {
    for (std::size_t i = 0; i < evidence.size(); ++i) {
      if (ev.has_model[i]) evidence[i] = true;
    }
    if (ev.scores.empty()) return;
    aff = accumulate_affinity(ev.scores);
    lap = normalized_laplacian(normalize_affinity(*aff));
    if (keep_debug) dbg = std::move(ev.debug);
  };

  if (views.trajectory) {
    auto ev = trajectory_view(clean, cfg, t, keep_debug);
    absorb(ev, result.traj_affinity, result.traj_debug, l_traj);
  }
  if (views.flow) {
    auto ev = flow_view(clean, cfg, t, keep_debug);
    absorb(ev, result.flow_affinity, result.flow_debug, l_flow);
  }

  std::vector<ObjectId> missing;
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (!evidence[i]) missing.push_back(bundle.objects[i].id);
  }
  if (!missing.empty() || (!l_traj && !l_flow)) {
    std::ostringstream os;
    os << "no usable motion model in views '" << views.to_string() << "' for object(s)";
    for (auto id : missing) os << ' ' << id;
    throw NotEnoughEvidence(os.str());
  }

  const int k_motions = bundle.num_motions;
  if (l_traj && l_flow) {
    const auto emb =
        coregularized_embeddings(*l_traj, *l_flow, k_motions, cfg.lambda, cfg.coreg_iters);
    result.assignment = cluster_objects(emb.traj, emb.flow, k_motions, cfg.seed,
                                        cfg.kmeans_restarts, background);
  } else {
    const Embedding single[] = {spectral_embedding(l_traj ? *l_traj : *l_flow, k_motions)};
    result.assignment =
        cluster_objects(single, k_motions, cfg.seed, cfg.kmeans_restarts, background);
  }
  result.label_maps = cluster_label_maps(bundle, result.assignment, background);
  return result;
}

}  // namespace motionfuse
