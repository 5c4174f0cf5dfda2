#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "evw/grid.hpp"

namespace evw {

/// Quasi-Euclidean grid metric: max(|dk|,|dl|) + (sqrt(2)-1)*min(|dk|,|dl|),
/// the cost of the cheapest 8-connected path with axial weight 1 and diagonal
/// weight sqrt(2).
inline double quasi_euclidean(int k, int l, int p, int q) {
  const double dk = std::abs(p - k);
  const double dl = std::abs(q - l);
  constexpr double diag = std::numbers::sqrt2 - 1.0;
  return dk >= dl ? diag * dl + dk : diag * dk + dl;
}

/// Signed quasi-Euclidean distance to a region boundary: positive inside the
/// region, zero on the boundary bins, negative outside, scaled to radians by
/// norm_factor = 2*pi/max(H, W). Distances never wrap: the index grid is a
/// plain rectangle.
struct SignedDistanceMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;
  std::vector<FreqIndex> cell_bins;
  double norm_factor = 0.0;
};

inline double default_norm_factor(int height, int width) {
  return 2.0 * std::numbers::pi / static_cast<double>(std::max(height, width));
}

/// Sentinel for a region with empty exterior: strictly larger than any
/// attainable distance, still finite.
inline double whole_grid_sentinel(int height, int width, double norm_factor) {
  return norm_factor * static_cast<double>(height + width);
}

namespace detail {

struct DistanceInputs {
  std::vector<char> inside;
  bool whole_grid = false;
};

inline DistanceInputs check_distance_inputs(const std::vector<FreqIndex>& cell_bins,
                                            const std::vector<FreqIndex>& boundary,
                                            int height, int width) {
  if (height <= 0 || width <= 0)
    throw InvalidInputError("signed_distance: bad dimensions");
  if (cell_bins.empty()) throw InvalidInputError("signed_distance: empty cell");
  DistanceInputs in;
  in.inside.assign(static_cast<std::size_t>(height) * width, 0);
  for (FreqIndex b : cell_bins) {
    if (b.k < 0 || b.k >= height || b.l < 0 || b.l >= width)
      throw InvalidInputError("signed_distance: cell bin out of range");
    in.inside[flat_index(b, width)] = 1;
  }
  for (FreqIndex b : boundary) {
    if (b.k < 0 || b.k >= height || b.l < 0 || b.l >= width ||
        !in.inside[flat_index(b, width)])
      throw InvalidInputError("signed_distance: boundary must be a subset of the cell");
  }
  in.whole_grid =
      std::count(in.inside.begin(), in.inside.end(), char(1)) ==
      static_cast<std::ptrdiff_t>(in.inside.size());
  if (boundary.empty() && !in.whole_grid)
    throw InvalidInputError("signed_distance: empty boundary for a proper subset cell");
  return in;
}

}  // namespace detail

/// Two-pass chamfer sweep with weights 1 (axial) and sqrt(2) (diagonal).
/// Those weights make the propagated distance exactly the quasi-Euclidean
/// metric, so the sweep reproduces the brute-force minimum over the boundary
/// with no approximation error.
inline SignedDistanceMap signed_distance(const std::vector<FreqIndex>& cell_bins,
                                         const std::vector<FreqIndex>& boundary,
                                         int height, int width, double norm_factor) {
  const auto in = detail::check_distance_inputs(cell_bins, boundary, height, width);
  SignedDistanceMap map;
  map.height = height;
  map.width = width;
  map.norm_factor = norm_factor;
  map.cell_bins = cell_bins;

  if (boundary.empty()) {
    map.values.assign(static_cast<std::size_t>(height) * width,
                      whole_grid_sentinel(height, width, norm_factor));
    return map;
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kDiag = std::numbers::sqrt2;
  std::vector<double> dist(static_cast<std::size_t>(height) * width, kInf);
  for (FreqIndex b : boundary) dist[flat_index(b, width)] = 0.0;

  auto relax = [&](std::size_t to, std::size_t from, double w) {
    if (dist[from] + w < dist[to]) dist[to] = dist[from] + w;
  };
  const std::size_t W = static_cast<std::size_t>(width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * W + c;
      if (c > 0) relax(i, i - 1, 1.0);
      if (r > 0) {
        relax(i, i - W, 1.0);
        if (c > 0) relax(i, i - W - 1, kDiag);
        if (c + 1 < width) relax(i, i - W + 1, kDiag);
      }
    }
  }
  for (int r = height - 1; r >= 0; --r) {
    for (int c = width - 1; c >= 0; --c) {
      const std::size_t i = static_cast<std::size_t>(r) * W + c;
      if (c + 1 < width) relax(i, i + 1, 1.0);
      if (r + 1 < height) {
        relax(i, i + W, 1.0);
        if (c + 1 < width) relax(i, i + W + 1, kDiag);
        if (c > 0) relax(i, i + W - 1, kDiag);
      }
    }
  }

  map.values.resize(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    map.values[i] = (in.inside[i] ? 1.0 : -1.0) * norm_factor * dist[i];
  return map;
}

/// Literal double loop over bins x boundary. Test oracle for signed_distance;
/// same contract, quadratic cost.
inline SignedDistanceMap brute_force_signed_distance(const std::vector<FreqIndex>& cell_bins,
                                                     const std::vector<FreqIndex>& boundary,
                                                     int height, int width,
                                                     double norm_factor) {
  const auto in = detail::check_distance_inputs(cell_bins, boundary, height, width);
  SignedDistanceMap map;
  map.height = height;
  map.width = width;
  map.norm_factor = norm_factor;
  map.cell_bins = cell_bins;

  if (boundary.empty()) {
    map.values.assign(static_cast<std::size_t>(height) * width,
                      whole_grid_sentinel(height, width, norm_factor));
    return map;
  }

  map.values.resize(static_cast<std::size_t>(height) * width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (FreqIndex b : boundary) best = std::min(best, quasi_euclidean(r, c, b.k, b.l));
      const std::size_t i = flat_index({r, c}, width);
      map.values[i] = (in.inside[i] ? 1.0 : -1.0) * norm_factor * best;
    }
  }
  return map;
}

}  // namespace evw
