#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exomap/classification.hpp"
#include "exomap/rng.hpp"
#include "exomap/traversability.hpp"

using namespace exomap;

namespace {

// Analytic staircase: floor at 0 for x < 0, then 5 treads of depth 0.3 m
// rising 0.1 m each.
double staircaseHeight(double x) {
  if (x < 0.0) return 0.0;
  const int step = std::min(4, static_cast<int>(x / 0.3));
  return 0.1 * (step + 1);
}

MultiLayerGrid staircaseGrid() {
  // x in [-1, 2.5], y in [0, 1].
  MultiLayerGrid g(GridGeometry(0.02, {-1.0, 0.0}, 51, 176), "map");
  for (int r = 0; r < 51; ++r) {
    for (int c = 0; c < 176; ++c) {
      const Eigen::Vector2d p = g.geometry().cellToWorld({r, c});
      g.at("elevation", {r, c}) = staircaseHeight(p.x());
    }
  }
  return g;
}

// Brute-force oracle over every cell pair.
TraversabilityMap naiveScoreMap(const MultiLayerGrid& map, const TraversabilityParams& params) {
  const GridGeometry& g = map.geometry();
  TraversabilityMap out(g);
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      const double center = map.at("elevation", {r, c});
      if (!isKnown(center)) continue;
      double h_max = 0.0;
      int support = 0;
      for (int rr = 0; rr < g.rows(); ++rr) {
        for (int cc = 0; cc < g.cols(); ++cc) {
          const double dx = (cc - c) * g.resolution();
          const double dy = (rr - r) * g.resolution();
          if (dx * dx + dy * dy > params.stride_radius * params.stride_radius) continue;
          const double h = map.at("elevation", {rr, cc});
          if (!isKnown(h)) continue;
          if (rr != r || cc != c) ++support;
          h_max = std::max(h_max, std::abs(h - center));
        }
      }
      if (support < params.min_support) continue;
      out.at({r, c}) = 1.0 - std::min(h_max / params.step_height, 1.0);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("maxHeightDiff") {
  SUBCASE("flat plane is zero everywhere") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 30, 30), "map");
    for (auto& v : g.layer("elevation").values) v = 0.37;
    for (int r = 5; r < 25; r += 5) {
      for (int c = 5; c < 25; c += 5) {
        CHECK(maxHeightDiff(g, {r, c}, 0.2) == 0.0);
      }
    }
  }

  SUBCASE("tread cell near a riser edge sees one riser") {
    const MultiLayerGrid g = staircaseGrid();
    // Cell on tread 1 (height 0.2) 0.05 m from the riser up to tread 2.
    const CellIndex i = g.geometry().worldToCell({0.55, 0.5});
    REQUIRE(g.at("elevation", i) == doctest::Approx(0.2));
    CHECK(maxHeightDiff(g, i, 0.2) == doctest::Approx(0.1).epsilon(1e-12));
  }

  SUBCASE("cell beside a 1 m wall sees the wall") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 20, 20), "map");
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        g.at("elevation", {r, c}) = (c >= 15) ? 1.0 : 0.0;
      }
    }
    CHECK(maxHeightDiff(g, {10, 13}, 0.2) == doctest::Approx(1.0));
  }

  SUBCASE("unknown center errors") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 5, 5), "map");
    CHECK_THROWS_AS(maxHeightDiff(g, {2, 2}, 0.1), InvalidArgumentError);
  }

  SUBCASE("unknown neighbors are excluded") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 9, 9), "map");
    g.at("elevation", {4, 4}) = 0.0;
    g.at("elevation", {4, 5}) = 0.05;
    // A towering unknown-free zone: only the known neighbor counts.
    CHECK(maxHeightDiff(g, {4, 4}, 0.1) == doctest::Approx(0.05));
  }
}

TEST_CASE("traversabilityScore") {
  CHECK(traversabilityScore(0.0, 0.2) == 1.0);
  CHECK(traversabilityScore(0.2, 0.2) == 0.0);
  CHECK(traversabilityScore(0.5, 0.2) == 0.0);
  CHECK(traversabilityScore(0.1, 0.2) == doctest::Approx(0.5).epsilon(1e-15));

  SUBCASE("monotone in h_max and step height") {
    double prev = 1.0;
    for (double h = 0.0; h <= 0.3; h += 0.01) {
      const double t = traversabilityScore(h, 0.2);
      CHECK(t <= prev + 1e-15);
      prev = t;
    }
    double prev_star = 0.0;
    for (double h_star = 0.05; h_star <= 0.5; h_star += 0.05) {
      const double t = traversabilityScore(0.1, h_star);
      CHECK(t >= prev_star - 1e-15);
      prev_star = t;
    }
  }
}

TEST_CASE("scoreMap on the analytic staircase") {
  const MultiLayerGrid g = staircaseGrid();
  TraversabilityParams params;  // s* = h* = 0.2
  const TraversabilityMap scores = scoreMap(g, params);

  // Edge tread cells: the 0.1 m riser at s* = 0.2, h* = 0.2 scores 0.5.
  const CellIndex tread = g.geometry().worldToCell({0.55, 0.5});
  CHECK(std::abs(scores.at(tread) - 0.5) < 1e-12);

  // Open floor far from the staircase scores 1.
  const CellIndex floor_cell = g.geometry().worldToCell({-0.8, 0.5});
  CHECK(scores.at(floor_cell) == 1.0);
}

TEST_CASE("scoreMap support gating") {
  MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 9, 9), "map");
  g.at("elevation", {4, 4}) = 0.1;  // isolated known cell
  TraversabilityParams params;
  params.min_support = 2;
  const TraversabilityMap scores = scoreMap(g, params);
  CHECK(!isKnown(scores.at({4, 4})));

  SUBCASE("all-unknown input yields all-unknown output") {
    MultiLayerGrid empty(GridGeometry(0.02, {0, 0}, 5, 5), "map");
    const TraversabilityMap s = scoreMap(empty, params);
    for (double v : s.values) CHECK(!isKnown(v));
  }
}

TEST_CASE("scoreMap equals the naive double-loop oracle on random grids") {
  Rng rng(404);
  for (int trial = 0; trial < 3; ++trial) {
    MultiLayerGrid g(GridGeometry(0.05, {0, 0}, 40, 40), "map");
    for (auto& v : g.layer("elevation").values) {
      v = (rng.uniform() < 0.25) ? kUnknown : rng.uniform(-0.3, 0.3);
    }
    TraversabilityParams params;
    params.stride_radius = 0.12;
    params.step_height = 0.15;
    const TraversabilityMap fast = scoreMap(g, params);
    const TraversabilityMap slow = naiveScoreMap(g, params);
    for (std::size_t i = 0; i < fast.values.size(); ++i) {
      if (isKnown(slow.values[i])) {
        CHECK(fast.values[i] == slow.values[i]);
      } else {
        CHECK(!isKnown(fast.values[i]));
      }
    }
  }
}

TEST_CASE("scores are invariant to a constant height offset") {
  Rng rng(21);
  MultiLayerGrid g(GridGeometry(0.05, {0, 0}, 25, 25), "map");
  for (auto& v : g.layer("elevation").values) v = rng.uniform(-0.2, 0.2);
  MultiLayerGrid shifted = g;
  for (auto& v : shifted.layer("elevation").values) v += 13.7;

  const TraversabilityMap a = scoreMap(g, {});
  const TraversabilityMap b = scoreMap(shifted, {});
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (isKnown(a.values[i])) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("scores are monotone non-increasing in the stride radius") {
  Rng rng(31);
  MultiLayerGrid g(GridGeometry(0.05, {0, 0}, 25, 25), "map");
  for (auto& v : g.layer("elevation").values) v = rng.uniform(-0.2, 0.2);

  TraversabilityParams small_r, big_r;
  small_r.stride_radius = 0.1;
  big_r.stride_radius = 0.2;
  const TraversabilityMap a = scoreMap(g, small_r);
  const TraversabilityMap b = scoreMap(g, big_r);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (isKnown(a.values[i]) && isKnown(b.values[i])) CHECK(b.values[i] <= a.values[i] + 1e-15);
  }
}

TEST_CASE("normalsBaseline") {
  SUBCASE("flat plane scores 1") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 30, 30), "map");
    for (auto& v : g.layer("elevation").values) v = 0.2;
    const TraversabilityMap s = normalsBaseline(g, {});
    CHECK(s.at({15, 15}) == doctest::Approx(1.0));
  }

  SUBCASE("ramp at max slope scores 0") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 30, 30), "map");
    for (int r = 0; r < 30; ++r) {
      for (int c = 0; c < 30; ++c) {
        const Eigen::Vector2d p = g.geometry().cellToWorld({r, c});
        g.at("elevation", {r, c}) = p.x();  // slope 45 degrees
      }
    }
    NormalsBaselineParams params;  // max_slope = 45 deg
    const TraversabilityMap s = normalsBaseline(g, params);
    CHECK(s.at({15, 15}) == doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("collinear neighborhood stays unknown") {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 9, 9), "map");
    for (int c = 0; c < 9; ++c) g.at("elevation", {4, c}) = 0.1;
    const TraversabilityMap s = normalsBaseline(g, {});
    CHECK(!isKnown(s.at({4, 4})));
  }

  SUBCASE("risers score below the step-height method") {
    const MultiLayerGrid g = staircaseGrid();
    const TraversabilityMap step_scores = scoreMap(g, {});
    const TraversabilityMap normal_scores = normalsBaseline(g, {});
    // Cells spanning a riser: the plane fit sees a cliff while the
    // step-height method tolerates the 0.1 m rise.
    int compared = 0;
    for (double x : {0.0, 0.3, 0.6, 0.9, 1.2}) {
      const CellIndex i = g.geometry().worldToCell({x + 0.005, 0.5});
      if (isKnown(normal_scores.at(i)) && isKnown(step_scores.at(i))) {
        CHECK(normal_scores.at(i) < step_scores.at(i));
        ++compared;
      }
    }
    CHECK(compared == 5);
  }
}

TEST_CASE("evaluateClassification") {
  GridGeometry geom(0.1, {0, 0}, 10, 10);

  SUBCASE("perfect predictor") {
    TraversabilityMap pred(geom), labels(geom);
    Rng rng(61);
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
      const bool positive = rng.uniform() < 0.6;
      pred.values[i] = positive ? 1.0 : 0.0;
      labels.values[i] = positive ? 1.0 : 0.0;
    }
    const auto report = evaluateClassification(pred, labels, {0.5});
    CHECK(report.precision[0] == 1.0);
    CHECK(report.recall[0] == 1.0);
    CHECK(report.f_score[0] == 1.0);
  }

  SUBCASE("all-positive predictor: recall 1, precision = positive fraction") {
    TraversabilityMap pred(geom), labels(geom);
    int positives = 0;
    Rng rng(62);
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
      pred.values[i] = 1.0;
      const bool positive = rng.uniform() < 0.4;
      positives += positive;
      labels.values[i] = positive ? 1.0 : 0.0;
    }
    const auto report = evaluateClassification(pred, labels, {0.5});
    CHECK(report.recall[0] == 1.0);
    CHECK(report.precision[0] ==
          doctest::Approx(static_cast<double>(positives) / pred.values.size()));
  }

  SUBCASE("matches a hand-rolled confusion matrix over a sweep") {
    TraversabilityMap pred(geom), labels(geom);
    Rng rng(63);
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
      pred.values[i] = rng.uniform();
      labels.values[i] = rng.uniform() < 0.5 ? 1.0 : 0.0;
    }
    const std::vector<double> thresholds{0.1, 0.3, 0.5, 0.7, 0.9};
    const auto report = evaluateClassification(pred, labels, thresholds);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      int tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const bool predicted = pred.values[i] >= thresholds[k];
        const bool positive = labels.values[i] >= 0.5;
        tp += predicted && positive;
        fp += predicted && !positive;
        fn += !predicted && positive;
      }
      const double p = tp + fp > 0 ? double(tp) / (tp + fp) : 0.0;
      const double r = tp + fn > 0 ? double(tp) / (tp + fn) : 0.0;
      CHECK(report.precision[k] == p);
      CHECK(report.recall[k] == r);
      if (p + r > 0) CHECK(report.f_score[k] == doctest::Approx(2 * p * r / (p + r)));
    }
  }

  SUBCASE("misaligned grids error") {
    TraversabilityMap pred(geom);
    TraversabilityMap labels(GridGeometry(0.1, {0, 0}, 5, 5));
    CHECK_THROWS_AS(evaluateClassification(pred, labels, {0.5}), InvalidArgumentError);
  }

  SUBCASE("degenerate labels error") {
    TraversabilityMap pred(geom), labels(geom);
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
      pred.values[i] = 0.5;
      labels.values[i] = 1.0;
    }
    CHECK_THROWS_AS(evaluateClassification(pred, labels, {0.5}), InvalidArgumentError);
  }
}
