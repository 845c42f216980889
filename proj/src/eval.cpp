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

#include "motionfuse/eval.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "json.hpp"
#include "motionfuse/errors.hpp"

namespace motionfuse {
namespace {

constexpr Eigen::Index kExhaustiveLimit = 8;

// Rows <= cols. Depth-first over rows, first maximum wins.
void search(const Eigen::MatrixXd& w, Eigen::Index row, std::vector<bool>& used,
            std::vector<int>& current, double total, double& best, std::vector<int>& best_map) {
  if (row == w.rows()) {
    if (total > best) {
      best = total;
      best_map = current;
    }
    return;
  }
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    if (used[static_cast<std::size_t>(c)]) continue;
    used[static_cast<std::size_t>(c)] = true;
    current[static_cast<std::size_t>(row)] = static_cast<int>(c);
    search(w, row + 1, used, current, total + w(row, c), best, best_map);
    used[static_cast<std::size_t>(c)] = false;
  }
}

std::vector<int> exhaustive(const Eigen::MatrixXd& w) {
  std::vector<bool> used(static_cast<std::size_t>(w.cols()), false);
  std::vector<int> current(static_cast<std::size_t>(w.rows()), -1);
  std::vector<int> best_map = current;
  double best = -1.0;
  search(w, 0, used, current, 0.0, best, best_map);
  return best_map;
}

// Shortest augmenting path Hungarian method on cost = max - w, rows <= cols.
std::vector<int> hungarian(const Eigen::MatrixXd& w) {
  const Eigen::Index n = w.rows();
  const Eigen::Index m = w.cols();
  const double top = w.size() ? w.maxCoeff() : 0.0;
  auto cost = [&](Eigen::Index i, Eigen::Index j) { return top - w(i - 1, j - 1); };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Eigen::Index> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    p[0] = i;
    Eigen::Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const Eigen::Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0, j) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(p[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Eigen::Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (Eigen::Index j = 1; j <= m; ++j) {
    const Eigen::Index i = p[static_cast<std::size_t>(j)];
    if (i > 0) out[static_cast<std::size_t>(i - 1)] = static_cast<int>(j - 1);
  }
  return out;
}

}  // namespace

std::vector<int> optimal_assignment(const Eigen::MatrixXd& weights) {
  if (weights.rows() == 0 || weights.cols() == 0) {
    return std::vector<int>(static_cast<std::size_t>(weights.rows()), -1);
  }
  const bool transpose = weights.rows() > weights.cols();
  const Eigen::MatrixXd w = transpose ? Eigen::MatrixXd(weights.transpose()) : weights;
  const std::vector<int> map =
      w.cols() <= kExhaustiveLimit ? exhaustive(w) : hungarian(w);
  if (!transpose) return map;
  std::vector<int> out(static_cast<std::size_t>(weights.rows()), -1);
  for (std::size_t c = 0; c < map.size(); ++c) {
    if (map[c] >= 0) out[static_cast<std::size_t>(map[c])] = static_cast<int>(c);
  }
  return out;
}

MetricReport evaluate(std::span<const LabelMap> pred, std::span<const LabelMap> gt) {
  if (pred.size() != gt.size()) {
    throw ShapeMismatch("prediction has " + std::to_string(pred.size()) + " frames, ground truth " +
                        std::to_string(gt.size()));
  }
  std::map<std::uint16_t, double> p_size, g_size;
  std::map<std::pair<std::uint16_t, std::uint16_t>, double> overlap;
  for (std::size_t f = 0; f < pred.size(); ++f) {
    const LabelMap& a = pred[f];
    const LabelMap& b = gt[f];
    if (a.width != b.width || a.height != b.height || a.labels.size() != b.labels.size()) {
      throw ShapeMismatch("frame " + std::to_string(f) + ": prediction is " +
                          std::to_string(a.width) + "x" + std::to_string(a.height) +
                          ", ground truth " + std::to_string(b.width) + "x" +
                          std::to_string(b.height));
    }
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      const auto lp = a.labels[i];
      const auto lg = b.labels[i];
      if (lp) p_size[lp] += 1;
      if (lg) g_size[lg] += 1;
      if (lp && lg) overlap[{lp, lg}] += 1;
    }
  }
  MetricReport r;
  r.num_pred = p_size.size();
  r.num_gt = g_size.size();
  if (r.num_pred == 0 && r.num_gt == 0) {
    r.pu = r.ru = r.fu = 1.0;
    return r;
  }
  if (r.num_pred == 0 || r.num_gt == 0) {
    r.pu = r.num_pred == 0 ? 1.0 : 0.0;
    r.ru = r.num_gt == 0 ? 1.0 : 0.0;
    r.fu = 0.0;
    return r;
  }
  std::vector<std::uint16_t> pids, gids;
  for (const auto& [id, _] : p_size) pids.push_back(id);
  for (const auto& [id, _] : g_size) gids.push_back(id);
  Eigen::MatrixXd fm(static_cast<Eigen::Index>(pids.size()), static_cast<Eigen::Index>(gids.size()));
  for (std::size_t i = 0; i < pids.size(); ++i) {
    for (std::size_t j = 0; j < gids.size(); ++j) {
      const auto it = overlap.find({pids[i], gids[j]});
      const double inter = it == overlap.end() ? 0.0 : it->second;
      fm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          2.0 * inter / (p_size[pids[i]] + g_size[gids[j]]);
    }
  }
  const auto match = optimal_assignment(fm);
  double total = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] < 0) continue;
    const double f = fm(static_cast<Eigen::Index>(i), match[i]);
    total += f;
    r.matches.push_back({pids[i], gids[static_cast<std::size_t>(match[i])], f});
  }
  r.pu = total / static_cast<double>(r.num_pred);
  r.ru = total / static_cast<double>(r.num_gt);
  r.fu = r.pu + r.ru > 0 ? 2.0 * r.pu * r.ru / (r.pu + r.ru) : 0.0;
  return r;
}

std::string to_json(const MetricReport& report) {
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& m : report.matches) {
    matches.push_back({{"pred", m.pred}, {"gt", m.gt}, {"f", m.f}});
  }
  const nlohmann::json doc = {{"Pu", report.pu},           {"Ru", report.ru},
                              {"Fu", report.fu},           {"num_pred", report.num_pred},
                              {"num_gt", report.num_gt},   {"matches", matches}};
  return doc.dump(2) + "\n";
}

double object_label_accuracy(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) throw ShapeMismatch("label vectors differ in length");
  if (pred.empty()) return 1.0;
  std::map<int, Eigen::Index> prow, tcol;
  for (int p : pred) prow.emplace(p, 0);
  for (int t : truth) tcol.emplace(t, 0);
  Eigen::Index idx = 0;
  for (auto& [_, i] : prow) i = idx++;
  idx = 0;
  for (auto& [_, j] : tcol) j = idx++;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(prow.size()),
                                                 static_cast<Eigen::Index>(tcol.size()));
  for (std::size_t i = 0; i < pred.size(); ++i) counts(prow[pred[i]], tcol[truth[i]]) += 1.0;
  const auto match = optimal_assignment(counts);
  double correct = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] >= 0) correct += counts(static_cast<Eigen::Index>(i), match[i]);
  }
  return correct / static_cast<double>(pred.size());
}

}  // namespace motionfuse
