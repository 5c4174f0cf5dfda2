#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "evw/distance_transform.hpp"
#include "evw/filter_bank.hpp"
#include "evw/voronoi.hpp"

using namespace evw;

namespace {

SeedSet make_seed_set(std::vector<FreqIndex> seeds, int h, int w) {
  std::set<FreqIndex> closed{{0, 0}};
  for (FreqIndex s : seeds) {
    closed.insert(s);
    closed.insert(mate(s, h, w));
  }
  SeedSet ss;
  ss.seeds.assign(closed.begin(), closed.end());
  return ss;
}

struct CellSets {
  std::vector<FreqIndex> bins;
  std::vector<FreqIndex> boundary;
};

CellSets class_sets(const PartitionLabels& part, std::int32_t rep) {
  CellSets cs;
  const std::int32_t pc = part.pair_of[rep];
  for (int k = 0; k < part.height; ++k)
    for (int l = 0; l < part.width; ++l) {
      const std::int32_t lab = part.labels[flat_index({k, l}, part.width)];
      if (lab == rep || lab == pc) cs.bins.push_back({k, l});
    }
  cs.boundary = cell_boundary(part, rep);
  return cs;
}

}  // namespace

TEST_CASE("quasi_euclidean frozen values") {
  CHECK(quasi_euclidean(0, 0, 1, 0) == 1.0);
  CHECK(quasi_euclidean(0, 0, 3, 3) ==
        Catch::Approx(3.0 * std::numbers::sqrt2).margin(1e-12));
  CHECK(quasi_euclidean(0, 0, 4, 1) ==
        Catch::Approx(4.0 + (std::numbers::sqrt2 - 1.0)).margin(1e-12));
  // symmetric in the two points
  CHECK(quasi_euclidean(2, 5, 7, 1) == quasi_euclidean(7, 1, 2, 5));
}

TEST_CASE("signed_distance on a three-column strip") {
  const int H = 5, W = 5;
  const double nf = default_norm_factor(H, W);
  std::vector<FreqIndex> cell, boundary;
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c <= 2; ++c) cell.push_back({r, c});
    boundary.push_back({r, 2});
  }
  const SignedDistanceMap map = signed_distance(cell, boundary, H, W, nf);
  CHECK(map.values[flat_index({2, 0}, W)] == Catch::Approx(nf * 2.0).margin(1e-12));
  CHECK(map.values[flat_index({2, 4}, W)] == Catch::Approx(-nf * 2.0).margin(1e-12));
  for (int r = 0; r < H; ++r) CHECK(map.values[flat_index({r, 2}, W)] == 0.0);
}

TEST_CASE("whole-grid cell maps to the finite sentinel") {
  std::vector<FreqIndex> cell;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 6; ++c) cell.push_back({r, c});
  const double nf = default_norm_factor(4, 6);
  const SignedDistanceMap map = signed_distance(cell, {}, 4, 6, nf);
  for (double v : map.values) {
    CHECK(v == whole_grid_sentinel(4, 6, nf));
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("single boundary bin at the grid center") {
  const int H = 9, W = 9;
  const double nf = default_norm_factor(H, W);
  std::vector<FreqIndex> cell;
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) cell.push_back({r, c});
  // whole grid as cell, one boundary bin: distance is the metric itself
  const SignedDistanceMap map = signed_distance(cell, {{4, 4}}, H, W, nf);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c)
      CHECK(map.values[flat_index({r, c}, W)] ==
            Catch::Approx(nf * quasi_euclidean(r, c, 4, 4)).margin(1e-12));
}

TEST_CASE("chamfer equals the brute-force oracle on random paired partitions") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = std::uniform_int_distribution<>(4, 32)(rng);
    const int w = std::uniform_int_distribution<>(4, 32)(rng);
    const int n = std::uniform_int_distribution<>(1, 6)(rng);
    std::vector<FreqIndex> raw;
    for (int i = 0; i < n; ++i)
      raw.push_back({std::uniform_int_distribution<>(0, h - 1)(rng),
                     std::uniform_int_distribution<>(0, w - 1)(rng)});
    const PartitionLabels part = label_grid(make_seed_set(raw, h, w), h, w);
    const double nf = default_norm_factor(h, w);

    for (std::int32_t c = 0; c < part.num_cells(); ++c) {
      if (part.pair_of[c] < c) continue;  // one class representative only
      const CellSets cs = class_sets(part, c);
      if (cs.boundary.empty() && cs.bins.size() != static_cast<std::size_t>(h) * w) continue;
      const SignedDistanceMap fast = signed_distance(cs.bins, cs.boundary, h, w, nf);
      const SignedDistanceMap slow =
          brute_force_signed_distance(cs.bins, cs.boundary, h, w, nf);
      for (std::size_t i = 0; i < fast.values.size(); ++i)
        REQUIRE(std::abs(fast.values[i] - slow.values[i]) <= 1e-12);
    }
  }
}

TEST_CASE("signed distance is quasi-Euclidean Lipschitz across 4-neighbors") {
  std::mt19937 rng(43);
  const int h = 16, w = 16;
  const PartitionLabels part = label_grid(make_seed_set({{3, 5}, {10, 2}}, h, w), h, w);
  const double nf = default_norm_factor(h, w);
  for (std::int32_t c = 0; c < part.num_cells(); ++c) {
    if (part.pair_of[c] < c) continue;
    const CellSets cs = class_sets(part, c);
    const SignedDistanceMap map = signed_distance(cs.bins, cs.boundary, h, w, nf);
    for (int r = 0; r < h; ++r)
      for (int col = 0; col < w; ++col) {
        const double v = map.values[flat_index({r, col}, w)];
        if (r + 1 < h)
          CHECK(std::abs(v - map.values[flat_index({r + 1, col}, w)]) <= nf + 1e-12);
        if (col + 1 < w)
          CHECK(std::abs(v - map.values[flat_index({r, col + 1}, w)]) <= nf + 1e-12);
      }
  }
}

TEST_CASE("sign convention: positive inside, zero on the edge, negative outside") {
  const int h = 12, w = 12;
  const PartitionLabels part = label_grid(make_seed_set({{2, 3}}, h, w), h, w);
  const double nf = default_norm_factor(h, w);
  for (std::int32_t c = 0; c < part.num_cells(); ++c) {
    if (part.pair_of[c] < c) continue;
    const CellSets cs = class_sets(part, c);
    const SignedDistanceMap map = signed_distance(cs.bins, cs.boundary, h, w, nf);
    const std::set<FreqIndex> inside(cs.bins.begin(), cs.bins.end());
    const std::set<FreqIndex> edge(cs.boundary.begin(), cs.boundary.end());
    for (int r = 0; r < h; ++r)
      for (int col = 0; col < w; ++col) {
        const double v = map.values[flat_index({r, col}, w)];
        if (edge.contains({r, col}))
          CHECK(v == 0.0);
        else if (inside.contains({r, col}))
          CHECK(v > 0.0);
        else
          CHECK(v < 0.0);
      }
  }
}

TEST_CASE("centered-layout class maps are exactly mate-symmetric") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    const int h = std::uniform_int_distribution<>(4, 24)(rng);
    const int w = std::uniform_int_distribution<>(4, 24)(rng);
    std::vector<FreqIndex> raw;
    for (int i = 0; i < 3; ++i)
      raw.push_back({std::uniform_int_distribution<>(0, h - 1)(rng),
                     std::uniform_int_distribution<>(0, w - 1)(rng)});
    const PartitionLabels part = label_grid(make_seed_set(raw, h, w), h, w);
    const ClassGeometry geom = build_class_geometry(part, default_norm_factor(h, w));
    for (const SignedDistanceMap& map : geom.dist_maps)
      for (int k = 0; k < h; ++k)
        for (int l = 0; l < w; ++l)
          REQUIRE(map.values[flat_index({k, l}, w)] ==
                  map.values[flat_index(mate({k, l}, h, w), w)]);
  }
}

TEST_CASE("distance transform input validation") {
  CHECK_THROWS_AS(signed_distance({}, {}, 4, 4, 1.0), InvalidInputError);
  // boundary not inside the cell
  CHECK_THROWS_AS(signed_distance({{0, 0}}, {{1, 1}}, 4, 4, 1.0), InvalidInputError);
  // proper subset with empty boundary
  CHECK_THROWS_AS(signed_distance({{0, 0}}, {}, 4, 4, 1.0), InvalidInputError);
}
