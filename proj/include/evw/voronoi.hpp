#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "evw/grid.hpp"
#include "evw/scale_space.hpp"

namespace evw {

/// Voronoi labeling of the frequency plane. Cell ids are assigned to seeds in
/// row-major seed order; pair_of maps each cell to its centrally symmetric
/// partner (itself when the seed is its own mate).
struct PartitionLabels {
  int height = 0;
  int width = 0;
  std::vector<std::int32_t> labels;
  std::vector<FreqIndex> seed_of;
  std::vector<std::int32_t> pair_of;
  std::int32_t dc_cell = 0;

  int num_cells() const { return static_cast<int>(seed_of.size()); }
};

namespace detail {

// Squared Euclidean distance between two bins on the centered frequency
// rectangle. Coordinates are the signed representatives in (-n/2, n/2]; the
// Nyquist coordinate of an even axis stands for both +n/2 and -n/2, and the
// axis distance takes the closer alias. That makes the mate map an exact
// isometry, so symmetric seed configurations produce exact ties. Integer
// arithmetic throughout: tie detection is exact.
inline std::int64_t axis_dist(int a, int b, int n) {
  const int ca = centered_coord(a, n);
  const int cb = centered_coord(b, n);
  int best = std::abs(ca - cb);
  if (n % 2 == 0) {
    if (2 * ca == n) best = std::min(best, std::abs(-ca - cb));
    if (2 * cb == n) best = std::min(best, std::abs(ca + cb));
  }
  return best;
}

inline std::int64_t seed_dist_sq(FreqIndex bin, FreqIndex seed, int h, int w) {
  const std::int64_t dk = axis_dist(bin.k, seed.k, h);
  const std::int64_t dl = axis_dist(bin.l, seed.l, w);
  return dk * dk + dl * dl;
}

}  // namespace detail

/// Fill pair_of from the seed positions: cell c pairs with the cell whose
/// seed is mate(seed_of(c)). Requires the seed set to be mate-closed.
inline PartitionLabels pair_symmetric_cells(PartitionLabels part) {
  const int n = part.num_cells();
  part.pair_of.assign(n, -1);
  for (std::int32_t c = 0; c < n; ++c) {
    const FreqIndex m = mate(part.seed_of[c], part.height, part.width);
    const std::int32_t pc = part.labels[flat_index(m, part.width)];
    if (pc < 0 || pc >= n || part.seed_of[pc] != m)
      throw Error("pair_symmetric_cells: seed set is not closed under the mate map");
    part.pair_of[c] = pc;
  }
  return part;
}

/// Nearest-seed labeling with an exactly symmetry-preserving tie rule: the
/// canonical half of the bins (those before their mate in row-major order)
/// is labeled by brute-force nearest seed, smallest cell id on ties; every
/// mirrored bin is filled as the pair of its mate's label. Self-mate bins
/// (DC, Nyquist corners) can only satisfy the symmetry invariant inside a
/// self-paired cell, so they prefer the nearest self-paired cell; at such a
/// bin every non-self-paired cell ties with its partner, hence a unique
/// nearest cell is always self-paired and this never overrides nearest-seed
/// correctness.
inline PartitionLabels label_grid(const SeedSet& seeds, int height, int width) {
  if (height <= 0 || width <= 0) throw InvalidInputError("label_grid: bad dimensions");
  if (seeds.seeds.empty()) throw InvalidInputError("label_grid: empty seed set");

  PartitionLabels part;
  part.height = height;
  part.width = width;
  part.seed_of = seeds.seeds;
  std::sort(part.seed_of.begin(), part.seed_of.end());
  part.seed_of.erase(std::unique(part.seed_of.begin(), part.seed_of.end()),
                     part.seed_of.end());
  const int n = part.num_cells();

  // seed position -> cell id, and the pair map (needs mate closure)
  std::vector<std::int32_t> id_at(static_cast<std::size_t>(height) * width, -1);
  for (std::int32_t c = 0; c < n; ++c) {
    const FreqIndex s = part.seed_of[c];
    if (s.k < 0 || s.k >= height || s.l < 0 || s.l >= width)
      throw InvalidInputError("label_grid: seed out of range");
    id_at[flat_index(s, width)] = c;
  }
  part.pair_of.assign(n, -1);
  for (std::int32_t c = 0; c < n; ++c) {
    const std::int32_t pc = id_at[flat_index(mate(part.seed_of[c], height, width), width)];
    if (pc < 0) throw InvalidInputError("label_grid: seed set is not closed under mate");
    part.pair_of[c] = pc;
  }

  part.labels.assign(static_cast<std::size_t>(height) * width, -1);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const FreqIndex bin{r, c};
      const std::size_t i = flat_index(bin, width);
      const FreqIndex m = mate(bin, height, width);
      const std::size_t im = flat_index(m, width);
      if (im < i) {
        part.labels[i] = part.pair_of[part.labels[im]];
        continue;
      }
      std::int64_t best = -1;
      std::int32_t best_id = -1;
      for (std::int32_t s = 0; s < n; ++s) {
        const std::int64_t d = detail::seed_dist_sq(bin, part.seed_of[s], height, width);
        if (best < 0 || d < best) {
          best = d;
          best_id = s;
        }
      }
      if (im == i) {
        std::int64_t best_sp = -1;
        std::int32_t best_sp_id = -1;
        for (std::int32_t s = 0; s < n; ++s) {
          if (part.pair_of[s] != s) continue;
          const std::int64_t d = detail::seed_dist_sq(bin, part.seed_of[s], height, width);
          if (best_sp < 0 || d < best_sp) {
            best_sp = d;
            best_sp_id = s;
          }
        }
        if (best_sp_id >= 0) best_id = best_sp_id;
      }
      part.labels[i] = best_id;
    }
  }
  part.dc_cell = part.labels[0];
  return part;
}

/// Inner boundary of a cell's paired region: bins of the union
/// cell ∪ pair_of(cell) with at least one 4-neighbor (periodic) outside it.
/// The whole-grid region has no boundary.
inline std::vector<FreqIndex> cell_boundary(const PartitionLabels& part, std::int32_t cell) {
  if (cell < 0 || cell >= part.num_cells())
    throw InvalidInputError("cell_boundary: bad cell id");
  const std::int32_t pc = part.pair_of[cell];
  const int H = part.height;
  const int W = part.width;
  static constexpr int dr[] = {-1, 1, 0, 0};
  static constexpr int dc[] = {0, 0, -1, 1};
  std::vector<FreqIndex> edge;
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      const std::int32_t lab = part.labels[flat_index({r, c}, W)];
      if (lab != cell && lab != pc) continue;
      for (int t = 0; t < 4; ++t) {
        const int rr = (r + dr[t] + H) % H;
        const int cc = (c + dc[t] + W) % W;
        const std::int32_t nb = part.labels[flat_index({rr, cc}, W)];
        if (nb != cell && nb != pc) {
          edge.push_back({r, c});
          break;
        }
      }
    }
  }
  return edge;
}

}  // namespace evw
