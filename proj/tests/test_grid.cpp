#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "exomap/grid.hpp"
#include "exomap/grid_io.hpp"
#include "exomap/rng.hpp"

using namespace exomap;

namespace {

// Independent oracle: nearest cell center by exhaustive scan.
CellIndex bruteForceNearestCell(const GridGeometry& g, const Eigen::Vector2d& p) {
  CellIndex best{0, 0};
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      const double d = (g.cellToWorld({r, c}) - p).norm();
      if (d < best_d - 1e-15) {
        best_d = d;
        best = {r, c};
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("worldToCell basics") {
  GridGeometry g(0.02, {0.0, 0.0}, 50, 50);

  CHECK(g.worldToCell({0.0, 0.0}) == CellIndex{0, 0});

  // 0.019/0.02 rounds to row 1; 0.05/0.02 = 2.5 ties toward the lower col.
  const CellIndex c = g.worldToCell({0.05, 0.019});
  CHECK(c == CellIndex{1, 2});
  CHECK(bruteForceNearestCell(g, {0.0401, 0.019}) == g.worldToCell({0.0401, 0.019}));

  CHECK_THROWS_AS(g.worldToCell({5.0, 0.0}), OutOfBoundsError);
  CHECK_THROWS_AS(g.worldToCell({-1.0, -1.0}), OutOfBoundsError);
}

TEST_CASE("worldToCell matches brute-force nearest-center search") {
  GridGeometry g(0.05, {-0.3, 0.2}, 12, 9);
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    // Sample strictly inside coverage, away from exact tie lines.
    const double x = -0.3 + rng.uniform(-0.024, (9 - 1) * 0.05 + 0.024);
    const double y = 0.2 + rng.uniform(-0.024, (12 - 1) * 0.05 + 0.024);
    CHECK(g.worldToCell({x, y}) == bruteForceNearestCell(g, {x, y}));
  }
}

TEST_CASE("cellToWorld and round trip") {
  GridGeometry g(0.02, {1.0, 1.0}, 10, 10);
  CHECK(g.cellToWorld({0, 0}) == Eigen::Vector2d(1.0, 1.0));

  // Hand arithmetic: col 3 -> x = 1 + 3*0.02, row 2 -> y = 1 + 2*0.02.
  const Eigen::Vector2d p = g.cellToWorld({2, 3});
  CHECK(p.x() == doctest::Approx(1.06).epsilon(1e-15));
  CHECK(p.y() == doctest::Approx(1.04).epsilon(1e-15));

  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      CHECK(g.worldToCell(g.cellToWorld({r, c})) == CellIndex{r, c});
    }
  }
  CHECK_THROWS_AS(g.cellToWorld({10, 0}), OutOfBoundsError);
}

TEST_CASE("cellsWithinRadius") {
  GridGeometry g(0.02, {0.0, 0.0}, 41, 41);
  const CellIndex center{20, 20};

  SUBCASE("radius zero yields only the center") {
    const auto n = cellsWithinRadius(g, center, 0.0);
    REQUIRE(n.members.size() == 1);
    CHECK(n.members[0] == center);
  }

  SUBCASE("radius one resolution is the 4-neighborhood plus center") {
    const auto n = cellsWithinRadius(g, center, 0.02);
    CHECK(n.members.size() == 5);
  }

  SUBCASE("disk count matches integer-point enumeration") {
    // Integer points with dr^2 + dc^2 <= 10^2, counted independently.
    int expected = 0;
    for (int dr = -10; dr <= 10; ++dr) {
      for (int dc = -10; dc <= 10; ++dc) {
        if (dr * dr + dc * dc <= 100) ++expected;
      }
    }
    CHECK(expected == 317);
    const auto n = cellsWithinRadius(g, center, 0.20);
    CHECK(static_cast<int>(n.members.size()) == expected);
  }

  SUBCASE("members are monotone nondecreasing in radius") {
    std::size_t prev = 0;
    for (double r = 0.0; r <= 0.3; r += 0.013) {
      const auto n = cellsWithinRadius(g, center, r);
      CHECK(n.members.size() >= prev);
      prev = n.members.size();
    }
  }

  SUBCASE("out-of-bounds members are excluded near the border") {
    const auto n = cellsWithinRadius(g, {0, 0}, 0.05);
    for (const auto& m : n.members) CHECK(g.contains(m));
  }
}

TEST_CASE("crop") {
  GridGeometry g(0.1, {0.0, 0.0}, 20, 20);
  MultiLayerGrid grid(g);
  // Synthetic ramp along x with a NaN hole.
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 20; ++c) {
      grid.at("elevation", {r, c}) = 0.05 * c;
    }
  }
  grid.at("elevation", {5, 5}) = kUnknown;

  SUBCASE("full-extent crop is identical") {
    const auto full = grid.crop({-0.05, -0.05}, {1.95, 1.95});
    CHECK(full.geometry() == grid.geometry());
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        const double a = grid.at("elevation", {r, c});
        const double b = full.at("elevation", {r, c});
        if (isKnown(a)) {
          CHECK(a == b);
        } else {
          CHECK(!isKnown(b));
        }
      }
    }
  }

  SUBCASE("single-cell crop") {
    const auto one = grid.crop({0.3, 0.4}, {0.3, 0.4});
    CHECK(one.geometry().rows() == 1);
    CHECK(one.geometry().cols() == 1);
    CHECK(one.at("elevation", {0, 0}) == grid.at("elevation", {4, 3}));
  }

  SUBCASE("window values match source pointwise") {
    const auto w = grid.crop({0.35, 0.25}, {1.15, 0.95});
    const auto& wg = w.geometry();
    for (int r = 0; r < wg.rows(); ++r) {
      for (int c = 0; c < wg.cols(); ++c) {
        const Eigen::Vector2d p = wg.cellToWorld({r, c});
        const double src = grid.at("elevation", grid.geometry().worldToCell(p));
        const double dst = w.at("elevation", {r, c});
        if (isKnown(src)) {
          CHECK(src == dst);
        } else {
          CHECK(!isKnown(dst));
        }
      }
    }
  }

  SUBCASE("empty intersection errors") {
    CHECK_THROWS_AS(grid.crop({5.0, 5.0}, {6.0, 6.0}), OutOfBoundsError);
    CHECK_THROWS_AS(grid.crop({1.0, 1.0}, {0.0, 0.0}), InvalidArgumentError);
  }
}

TEST_CASE("unknown sentinel propagates") {
  MultiLayerGrid grid(GridGeometry(0.1, {0.0, 0.0}, 4, 4));
  CHECK(!isKnown(grid.at("elevation", {2, 2})));
  grid.addLayer("variance");
  CHECK(!isKnown(grid.at("variance", {0, 0})));
}

TEST_CASE("grid file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "exomap_grid_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "map.exgm").string();

  MultiLayerGrid grid(GridGeometry(0.02, {-1.5, 2.0}, 30, 40), "map");
  grid.addLayer("variance");
  Rng rng(5);
  for (int r = 0; r < 30; ++r) {
    for (int c = 0; c < 40; ++c) {
      if (rng.uniform() < 0.2) continue;  // leave unknowns
      grid.at("elevation", {r, c}) = std::round(rng.uniform(-2.0, 2.0) * 1e4) / 1e4;
      grid.at("variance", {r, c}) = std::round(rng.uniform(0.0, 0.1) * 1e4) / 1e4;
    }
  }
  writeGridFile(path, grid);
  const MultiLayerGrid back = readGridFile(path);

  CHECK(back.geometry() == grid.geometry());
  CHECK(back.layerNames() == grid.layerNames());
  for (int r = 0; r < 30; ++r) {
    for (int c = 0; c < 40; ++c) {
      const double a = grid.at("elevation", {r, c});
      const double b = back.at("elevation", {r, c});
      if (isKnown(a)) {
        CHECK(b == doctest::Approx(a).epsilon(1e-6));
      } else {
        CHECK(!isKnown(b));
      }
    }
  }

  SUBCASE("bad magic is rejected") {
    const std::string bad = (dir / "bad.exgm").string();
    std::FILE* f = std::fopen(bad.c_str(), "wb");
    std::fputs("NOPE", f);
    std::fclose(f);
    CHECK_THROWS_AS(readGridFile(bad), DataError);
  }
}
