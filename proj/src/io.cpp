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

#include "motionfuse/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "json.hpp"
#include "motionfuse/errors.hpp"

namespace motionfuse {
namespace {

using json = nlohmann::json;

constexpr std::size_t kHeaderBytes = 12;
constexpr const char* kLabelsPattern = "labels/%04d.mseg";
constexpr const char* kFlowPattern = "flow/%04d.mflo";
constexpr const char* kDepthPattern = "depth/%04d.mdep";
constexpr const char* kTracksFile = "tracks.json";

static_assert(sizeof(float) == 4);

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

std::vector<std::uint8_t> header(const char* magic, int width, int height) {
  std::vector<std::uint8_t> out(magic, magic + 4);
  put_u32(out, static_cast<std::uint32_t>(width));
  put_u32(out, static_cast<std::uint32_t>(height));
  return out;
}

void write_bytes(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FormatError("failed writing " + path.string());
}

void write_text(const std::string& text, const fs::path& path) {
  write_bytes(std::vector<std::uint8_t>(text.begin(), text.end()), path);
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

struct Payload {
  int width = 0;
  int height = 0;
  const std::uint8_t* data = nullptr;
};

Payload check_binary(const std::vector<std::uint8_t>& bytes, const char* magic,
                     std::size_t element_size, const fs::path& path) {
  if (bytes.size() < kHeaderBytes) {
    throw FormatError(path.string() + ": expected at least " + std::to_string(kHeaderBytes) +
                      " header bytes, found " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), magic, 4) != 0) {
    throw FormatError(path.string() + ": bad magic, expected " + std::string(magic, 4));
  }
  const std::uint64_t w = get_u32(bytes.data() + 4);
  const std::uint64_t h = get_u32(bytes.data() + 8);
  const std::uint64_t expected = kHeaderBytes + w * h * element_size;
  if (bytes.size() != expected) {
    throw FormatError(path.string() + ": expected " + std::to_string(expected) + " bytes for " +
                      std::to_string(w) + "x" + std::to_string(h) + ", found " +
                      std::to_string(bytes.size()));
  }
  if (w == 0 || h == 0 || w > 1u << 15 || h > 1u << 15) {
    throw FormatError(path.string() + ": unsupported dimensions " + std::to_string(w) + "x" +
                      std::to_string(h));
  }
  return {static_cast<int>(w), static_cast<int>(h), bytes.data() + kHeaderBytes};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
}

// Expands the first "%d" or "%0Nd" in a file pattern.
std::string expand_pattern(const std::string& pattern, int index) {
  const auto pct = pattern.find('%');
  if (pct == std::string::npos) throw ManifestError("file pattern '" + pattern + "' has no index");
  std::size_t pos = pct + 1;
  int width = 0;
  bool zero = false;
  if (pos < pattern.size() && pattern[pos] == '0') {
    zero = true;
    ++pos;
  }
  while (pos < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[pos]))) {
    width = width * 10 + (pattern[pos] - '0');
    ++pos;
  }
  if (pos >= pattern.size() || pattern[pos] != 'd' || width > 16) {
    throw ManifestError("unsupported file pattern '" + pattern + "'");
  }
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), zero ? '0' : ' ');
  }
  return pattern.substr(0, pct) + digits + pattern.substr(pos + 1);
}

template <typename T>
T field(const json& j, const char* key, const fs::path& source) {
  if (!j.is_object() || !j.contains(key)) {
    throw ManifestError(source.string() + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ManifestError(source.string() + ": bad field '" + key + "': " + e.what());
  }
}

fs::path existing(const fs::path& dir, const std::string& rel) {
  const fs::path p = dir / rel;
  if (!fs::is_regular_file(p)) throw ManifestError("missing file " + p.string());
  return p;
}

json residuals_json(const ResidualMatrix& r) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.values.cols(); ++j) {
      row.push_back(r.valid(i, j) ? json(r.values(i, j)) : json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_json(const auto& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_flow(const FlowField& flow, const fs::path& path) {
  auto out = header("MFLO", flow.width, flow.height);
  out.reserve(out.size() + flow.uv.size() * 4);
  for (float c : flow.uv) put_f32(out, c);
  write_bytes(out, path);
}

void write_depth(const DepthField& depth, const fs::path& path) {
  auto out = header("MDEP", depth.width, depth.height);
  out.reserve(out.size() + depth.z.size() * 4);
  for (float z : depth.z) put_f32(out, z);
  write_bytes(out, path);
}

void write_label_map(const LabelMap& labels, const fs::path& path) {
  auto out = header("MSEG", labels.width, labels.height);
  out.reserve(out.size() + labels.labels.size() * 2);
  for (std::uint16_t l : labels.labels) put_u16(out, l);
  write_bytes(out, path);
}

FlowField read_flow(const fs::path& path) {
  const auto bytes = read_bytes(path);
  const Payload p = check_binary(bytes, "MFLO", 8, path);
  FlowField f(p.width, p.height);
  for (std::size_t i = 0; i < f.uv.size(); ++i) f.uv[i] = get_f32(p.data + 4 * i);
  return f;
}

DepthField read_depth(const fs::path& path) {
  const auto bytes = read_bytes(path);
  const Payload p = check_binary(bytes, "MDEP", 4, path);
  DepthField d(p.width, p.height);
  for (std::size_t i = 0; i < d.z.size(); ++i) d.z[i] = get_f32(p.data + 4 * i);
  return d;
}

LabelMap read_label_map(const fs::path& path) {
  const auto bytes = read_bytes(path);
  const Payload p = check_binary(bytes, "MSEG", 2, path);
  LabelMap m(p.width, p.height);
  for (std::size_t i = 0; i < m.labels.size(); ++i) m.labels[i] = get_u16(p.data + 2 * i);
  return m;
}

std::string tracks_to_json(const TrackSet& tracks) {
  json arr = json::array();
  for (const auto& t : tracks.tracks) {
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back(json::array({p.frame, p.x, p.y}));
    arr.push_back({{"track_id", t.track_id}, {"object_id", t.object_id}, {"points", pts}});
  }
  return dump(json{{"tracks", arr}});
}

TrackSet tracks_from_json(const std::string& text, const std::string& source) {
  TrackSet out;
  try {
    const json j = json::parse(text);
    for (const auto& t : j.at("tracks")) {
      Track track;
      track.track_id = t.at("track_id").get<int>();
      track.object_id = t.at("object_id").get<ObjectId>();
      for (const auto& p : t.at("points")) {
        if (!p.is_array() || p.size() != 3) throw ManifestError(source + ": bad track point");
        track.points.push_back({p[0].get<int>(), p[1].get<double>(), p[2].get<double>()});
      }
      out.tracks.push_back(std::move(track));
    }
  } catch (const json::exception& e) {
    throw ManifestError(source + ": " + e.what());
  }
  return out;
}

SceneBundle read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ManifestError("scene directory not found: " + dir.string());
  const fs::path mpath = existing(dir, "manifest.json");
  const json m = parse_json(mpath);

  SceneBundle b;
  b.width = field<int>(m, "width", mpath);
  b.height = field<int>(m, "height", mpath);
  b.frame_count = field<int>(m, "frame_count", mpath);
  b.num_motions = field<int>(m, "num_motions", mpath);
  if (b.width < 1 || b.height < 1) throw ManifestError(mpath.string() + ": bad dimensions");
  if (b.frame_count < 2) throw ManifestError(mpath.string() + ": frame_count must be >= 2");
  if (b.num_motions < 1) throw ManifestError(mpath.string() + ": num_motions must be >= 1");

  const json objects = field<json>(m, "objects", mpath);
  if (!objects.is_array() || objects.empty()) {
    throw ManifestError(mpath.string() + ": objects must be a non-empty array");
  }
  std::set<ObjectId> ids;
  for (const auto& o : objects) {
    ObjectMeta meta{field<ObjectId>(o, "id", mpath), field<std::string>(o, "name", mpath),
                    field<bool>(o, "is_background", mpath)};
    if (meta.id == kUnassigned || !ids.insert(meta.id).second) {
      throw ManifestError(mpath.string() + ": object id " + std::to_string(meta.id) +
                          " is reserved or duplicated");
    }
    b.objects.push_back(std::move(meta));
  }
  if (b.num_motions > static_cast<int>(b.objects.size())) {
    throw ManifestError(mpath.string() + ": num_motions exceeds the number of objects");
  }

  const json files = field<json>(m, "files", mpath);
  const auto labels = field<std::string>(files, "labels", mpath);
  const auto flow = field<std::string>(files, "flow", mpath);
  const auto depth = field<std::string>(files, "depth", mpath);
  const auto tracks = field<std::string>(files, "tracks", mpath);

  auto check_dims = [&](int w, int h, const fs::path& p) {
    if (w != b.width || h != b.height) {
      throw ManifestError(p.string() + ": dimensions " + std::to_string(w) + "x" +
                          std::to_string(h) + " differ from the manifest");
    }
  };
  for (int f = 0; f < b.frame_count; ++f) {
    const fs::path lp = existing(dir, expand_pattern(labels, f));
    LabelMap lm = read_label_map(lp);
    check_dims(lm.width, lm.height, lp);
    for (std::uint16_t l : lm.labels) {
      if (l != kUnassigned && !ids.count(l)) {
        throw ManifestError(lp.string() + ": label " + std::to_string(l) +
                            " is not a declared object");
      }
    }
    b.labels.push_back(std::move(lm));
    const fs::path dp = existing(dir, expand_pattern(depth, f));
    b.depth.push_back(read_depth(dp));
    check_dims(b.depth.back().width, b.depth.back().height, dp);
    if (f + 1 < b.frame_count) {
      const fs::path fp = existing(dir, expand_pattern(flow, f));
      b.flow.push_back(read_flow(fp));
      check_dims(b.flow.back().width, b.flow.back().height, fp);
    }
  }
  const fs::path tp = existing(dir, tracks);
  b.tracks = tracks_from_json(read_text(tp), tp.string());
  return b;
}

void write_bundle(const SceneBundle& bundle, const fs::path& dir) {
  fs::create_directories(dir);
  json objects = json::array();
  for (const auto& o : bundle.objects) {
    objects.push_back({{"id", o.id}, {"name", o.name}, {"is_background", o.is_background}});
  }
  const json manifest = {
      {"width", bundle.width},
      {"height", bundle.height},
      {"frame_count", bundle.frame_count},
      {"num_motions", bundle.num_motions},
      {"objects", objects},
      {"files",
       {{"labels", kLabelsPattern}, {"flow", kFlowPattern}, {"depth", kDepthPattern},
        {"tracks", kTracksFile}}},
  };
  write_text(dump(manifest), dir / "manifest.json");
  for (std::size_t f = 0; f < bundle.labels.size(); ++f) {
    write_label_map(bundle.labels[f], dir / expand_pattern(kLabelsPattern, static_cast<int>(f)));
  }
  for (std::size_t f = 0; f < bundle.flow.size(); ++f) {
    write_flow(bundle.flow[f], dir / expand_pattern(kFlowPattern, static_cast<int>(f)));
  }
  for (std::size_t f = 0; f < bundle.depth.size(); ++f) {
    write_depth(bundle.depth[f], dir / expand_pattern(kDepthPattern, static_cast<int>(f)));
  }
  write_text(tracks_to_json(bundle.tracks), dir / kTracksFile);
}

void write_ground_truth(const GroundTruth& truth, const fs::path& path) {
  json j = json::object();
  for (const auto& [id, group] : truth.motion_group) j[std::to_string(id)] = group;
  write_text(dump(j), path);
}

GroundTruth read_ground_truth(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ManifestError("missing file " + path.string());
  const json j = parse_json(path);
  if (!j.is_object()) throw ManifestError(path.string() + ": expected an object");
  GroundTruth gt;
  for (const auto& [key, value] : j.items()) {
    try {
      const unsigned long id = std::stoul(key);
      if (id == 0 || id > 0xffff) throw std::out_of_range(key);
      gt.motion_group[static_cast<ObjectId>(id)] = value.get<int>();
    } catch (const std::exception&) {
      throw ManifestError(path.string() + ": bad entry '" + key + "'");
    }
  }
  return gt;
}

std::vector<LabelMap> ground_truth_instance_maps(const SceneBundle& bundle,
                                                 const GroundTruth& truth) {
  std::vector<LabelMap> out;
  for (const auto& lm : bundle.labels) {
    LabelMap g(lm.width, lm.height, 0);
    for (std::size_t p = 0; p < lm.labels.size(); ++p) {
      const auto it = truth.motion_group.find(lm.labels[p]);
      g.labels[p] = it == truth.motion_group.end() ? 0 : static_cast<std::uint16_t>(it->second);
    }
    out.push_back(std::move(g));
  }
  return out;
}

void write_segment_output(const SceneBundle& bundle, const SegmentResult& result,
                          const EngineConfig& cfg, ViewSet views, const fs::path& dir) {
  fs::create_directories(dir);
  json objects = json::array();
  for (std::size_t i = 0; i < bundle.objects.size(); ++i) {
    objects.push_back({{"id", bundle.objects[i].id},
                       {"cluster", result.assignment.labels[i]},
                       {"moving", static_cast<bool>(result.assignment.moving[i])}});
  }
  const json doc = {
      {"width", bundle.width},
      {"height", bundle.height},
      {"frame_count", bundle.frame_count},
      {"num_motions", bundle.num_motions},
      {"views", views.to_string()},
      {"seed", cfg.seed},
      {"ork_t", result.ork_t},
      {"lambda", cfg.lambda},
      {"coreg_iters", cfg.coreg_iters},
      {"frame_gap_traj", cfg.frame_gap_traj},
      {"objects", objects},
      {"labels", kLabelsPattern},
  };
  write_text(dump(doc), dir / "result.json");
  for (std::size_t f = 0; f < result.label_maps.size(); ++f) {
    write_label_map(result.label_maps[f], dir / expand_pattern(kLabelsPattern, static_cast<int>(f)));
  }
}

void write_segment_debug(const SegmentResult& result, const fs::path& dir) {
  json doc = json::object();
  auto add = [&](const char* name, const std::optional<AffinityMatrix>& aff,
                 const std::optional<ViewDebug>& dbg) {
    if (!aff) return;
    json view = {{"affinity", matrix_json(aff->a)}};
    json pairs = json::array();
    if (dbg) {
      for (std::size_t i = 0; i < dbg->residuals.size(); ++i) {
        pairs.push_back({{"frame", dbg->residuals[i].frame},
                         {"residuals", residuals_json(dbg->residuals[i])},
                         {"scores", matrix_json(dbg->scores[i].scores)}});
      }
    }
    view["pairs"] = std::move(pairs);
    doc[name] = std::move(view);
  };
  add("trajectory", result.traj_affinity, result.traj_debug);
  add("flow", result.flow_affinity, result.flow_debug);
  fs::create_directories(dir);
  write_text(dump(doc), dir / "debug.json");
}

std::vector<LabelMap> read_instance_maps(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ManifestError("directory not found: " + dir.string());
  if (fs::is_regular_file(dir / "result.json")) {
    const fs::path rp = dir / "result.json";
    const json r = parse_json(rp);
    const int frames = field<int>(r, "frame_count", rp);
    const auto pattern = field<std::string>(r, "labels", rp);
    std::vector<LabelMap> out;
    for (int f = 0; f < frames; ++f) out.push_back(read_label_map(existing(dir, expand_pattern(pattern, f))));
    return out;
  }
  if (fs::is_regular_file(dir / "ground_truth.json")) {
    return ground_truth_instance_maps(read_bundle(dir), read_ground_truth(dir / "ground_truth.json"));
  }
  throw ManifestError(dir.string() + " holds neither result.json nor ground_truth.json");
}

}  // namespace motionfuse
