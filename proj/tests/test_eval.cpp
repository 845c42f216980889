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
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "motionfuse/errors.hpp"
#include "motionfuse/eval.hpp"
#include "oracles.hpp"

using namespace motionfuse;

namespace {

using Video = std::vector<LabelMap>;

// Paints rows [y0, y1) of every frame with `id`.
void paint_rows(Video& v, int y0, int y1, std::uint16_t id) {
  for (auto& m : v)
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < m.width; ++x) m.at(x, y) = id;
}

Video blank(int frames, int w, int h) { return Video(static_cast<std::size_t>(frames), LabelMap(w, h, 0)); }

Video random_video(std::mt19937_64& rng, int frames, int w, int h, int ids) {
  std::uniform_int_distribution<int> pick(0, ids);
  Video v = blank(frames, w, h);
  // Blocky labels so instances overlap in structured ways.
  for (auto& m : v) {
    for (int by = 0; by < h; by += 2) {
      for (int bx = 0; bx < w; bx += 2) {
        const auto id = static_cast<std::uint16_t>(pick(rng));
        for (int y = by; y < std::min(h, by + 2); ++y)
          for (int x = bx; x < std::min(w, bx + 2); ++x) m.at(x, y) = id;
      }
    }
  }
  return v;
}

Video relabel(const Video& v, const std::vector<std::uint16_t>& map) {
  Video out = v;
  for (auto& m : out)
    for (auto& l : m.labels) l = map[l];
  return out;
}

double brute_assignment_total(const Eigen::MatrixXd& w) {
  const bool flip = w.rows() > w.cols();
  const Eigen::MatrixXd m = flip ? Eigen::MatrixXd(w.transpose()) : w;
  std::vector<int> cols(static_cast<std::size_t>(m.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  double best = 0;
  do {
    double s = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) s += m(r, cols[static_cast<std::size_t>(r)]);
    best = std::max(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

double assignment_total(const Eigen::MatrixXd& w, const std::vector<int>& a) {
  double s = 0;
  for (std::size_t r = 0; r < a.size(); ++r)
    if (a[r] >= 0) s += w(static_cast<Eigen::Index>(r), a[r]);
  return s;
}

}  // namespace

TEST_CASE("identical prediction scores one") {
  Video gt = blank(3, 20, 10);
  paint_rows(gt, 0, 3, 4);
  paint_rows(gt, 5, 7, 9);
  const auto r = evaluate(gt, gt);
  CHECK(r.pu == 1.0);
  CHECK(r.ru == 1.0);
  CHECK(r.fu == 1.0);
  CHECK(r.num_pred == 2);
  CHECK(r.num_gt == 2);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.matches[0] == InstanceMatch{4, 4, 1.0});
}

TEST_CASE("half overlap scores one half") {
  // 100 GT pixels per frame, prediction shares 50 and adds 50 elsewhere.
  Video gt = blank(4, 10, 20), pred = blank(4, 10, 20);
  paint_rows(gt, 0, 10, 1);
  paint_rows(pred, 5, 15, 1);
  const auto r = evaluate(pred, gt);
  CHECK(r.pu == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.ru == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.fu == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("a spurious prediction halves precision only") {
  Video gt = blank(2, 10, 20), pred = blank(2, 10, 20);
  paint_rows(gt, 0, 10, 1);
  paint_rows(pred, 0, 8, 1);
  const auto base = evaluate(pred, gt);
  paint_rows(pred, 15, 20, 2);
  const auto spurious = evaluate(pred, gt);
  CHECK(spurious.pu == doctest::Approx(base.pu / 2));
  CHECK(spurious.ru == base.ru);
  CHECK(spurious.fu < base.fu);
}

TEST_CASE("empty-set conventions") {
  const Video none = blank(2, 4, 4);
  Video some = blank(2, 4, 4);
  paint_rows(some, 0, 1, 3);

  const auto both = evaluate(none, none);
  CHECK(both.pu == 1.0);
  CHECK(both.ru == 1.0);
  CHECK(both.fu == 1.0);

  const auto no_pred = evaluate(none, some);
  CHECK(no_pred.pu == 1.0);
  CHECK(no_pred.ru == 0.0);
  CHECK(no_pred.fu == 0.0);

  const auto no_gt = evaluate(some, none);
  CHECK(no_gt.pu == 0.0);
  CHECK(no_gt.ru == 1.0);
  CHECK(no_gt.fu == 0.0);
}

TEST_CASE("disjoint instances give zero without division by zero") {
  Video gt = blank(2, 6, 6), pred = blank(2, 6, 6);
  paint_rows(gt, 0, 2, 1);
  paint_rows(pred, 3, 5, 1);
  const auto r = evaluate(pred, gt);
  CHECK(r.pu == 0.0);
  CHECK(r.ru == 0.0);
  CHECK(r.fu == 0.0);
}

TEST_CASE("evaluate matches the brute-force tube oracle") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 60; ++trial) {
    CAPTURE(trial);
    const int np = 1 + trial % 5, ng = 1 + (trial / 5) % 4;
    const Video pred = random_video(rng, 3, 8, 6, np);
    const Video gt = random_video(rng, 3, 8, 6, ng);
    const auto r = evaluate(pred, gt);
    const auto o = oracle::tube_metric(pred, gt);
    CHECK(r.pu == doctest::Approx(o.pu).epsilon(1e-12));
    CHECK(r.ru == doctest::Approx(o.ru).epsilon(1e-12));
    CHECK(r.fu == doctest::Approx(o.fu).epsilon(1e-12));
    if (r.pu + r.ru > 0) CHECK(r.fu == doctest::Approx(2 * r.pu * r.ru / (r.pu + r.ru)));
  }
}

TEST_CASE("swapping prediction and truth exchanges precision and recall") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Video a = random_video(rng, 2, 8, 8, 1 + trial % 4);
    const Video b = random_video(rng, 2, 8, 8, 1 + trial % 3);
    const auto ab = evaluate(a, b);
    const auto ba = evaluate(b, a);
    CHECK(ab.pu == doctest::Approx(ba.ru).epsilon(1e-14));
    CHECK(ab.ru == doctest::Approx(ba.pu).epsilon(1e-14));
    CHECK(ab.fu == doctest::Approx(ba.fu).epsilon(1e-14));
  }
}

TEST_CASE("instance ids are arbitrary") {
  std::mt19937_64 rng(5);
  const Video pred = random_video(rng, 3, 10, 6, 4);
  const Video gt = random_video(rng, 3, 10, 6, 3);
  const auto base = evaluate(pred, gt);
  const std::vector<std::uint16_t> pmap = {0, 700, 3, 65535, 12};
  const std::vector<std::uint16_t> gmap = {0, 40, 2, 9};
  const auto moved = evaluate(relabel(pred, pmap), relabel(gt, gmap));
  CHECK(moved.pu == doctest::Approx(base.pu).epsilon(1e-14));
  CHECK(moved.ru == doctest::Approx(base.ru).epsilon(1e-14));
  CHECK(moved.fu == doctest::Approx(base.fu).epsilon(1e-14));
}

TEST_CASE("mismatched shapes are rejected") {
  const Video a = blank(2, 4, 4);
  CHECK_THROWS_AS(evaluate(a, blank(3, 4, 4)), ShapeMismatch);
  CHECK_THROWS_AS(evaluate(a, blank(2, 4, 5)), ShapeMismatch);
  CHECK_THROWS_AS(evaluate(a, blank(2, 5, 4)), ShapeMismatch);
}

TEST_CASE("optimal_assignment maximizes the total weight") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::pair<int, int>> shapes = {{1, 1}, {2, 3}, {3, 2}, {5, 5}, {8, 8},
                                                   {3, 9}, {9, 3}, {9, 9}, {4, 10}};
  for (auto [r, c] : shapes) {
    CAPTURE(r);
    CAPTURE(c);
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::MatrixXd w(r, c);
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
      const auto a = optimal_assignment(w);
      REQUIRE(a.size() == static_cast<std::size_t>(r));
      std::vector<int> seen;
      for (int col : a) {
        if (col < 0) continue;
        CHECK(col < c);
        CHECK(std::find(seen.begin(), seen.end(), col) == seen.end());
        seen.push_back(col);
      }
      CHECK(static_cast<int>(seen.size()) == std::min(r, c));
      CHECK(assignment_total(w, a) == doctest::Approx(brute_assignment_total(w)).epsilon(1e-12));
    }
  }
}

TEST_CASE("object label accuracy matches the permutation oracle") {
  const std::vector<int> pred = {2, 2, 0, 0, 1, 1};
  const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
  CHECK(object_label_accuracy(pred, truth) == 1.0);
  const std::vector<int> off = {0, 0, 0, 1, 1, 1};
  CHECK(object_label_accuracy(off, truth) == doctest::Approx(4.0 / 6.0));

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 7, kp = 1 + trial % 4, kt = 1 + (trial / 4) % 4;
    std::uniform_int_distribution<int> pp(0, kp - 1), pt(0, kt - 1);
    std::vector<int> p(static_cast<std::size_t>(n)), t(p.size());
    for (auto& v : p) v = pp(rng);
    for (auto& v : t) v = pt(rng);
    CHECK(object_label_accuracy(p, t) == doctest::Approx(oracle::label_accuracy(p, t)));
  }
  CHECK_THROWS_AS(object_label_accuracy(pred, std::span<const int>(off).subspan(0, 3)), ShapeMismatch);
}

TEST_CASE("report JSON carries the headline numbers") {
  Video gt = blank(2, 4, 4);
  paint_rows(gt, 0, 2, 1);
  const std::string text = to_json(evaluate(gt, gt));
  CHECK(text.find("\"Fu\": 1.0") != std::string::npos);
  CHECK(text.find("\"matches\"") != std::string::npos);
}
