#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "evw/distance_transform.hpp"
#include "evw/grid.hpp"
#include "evw/voronoi.hpp"

namespace evw {

/// Meyer-type window polynomial x^4*(35-84x+70x^2-20x^3): beta(0)=0,
/// beta(1)=1 and beta(x)+beta(1-x)=1, giving cos/sin complementary
/// transitions. Clamped by continuity outside [0,1]. Evaluated through the
/// reflection identity on (1/2, 1), where the direct expansion cancels badly.
inline double meyer_beta(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x > 0.5) return 1.0 - meyer_beta(1.0 - x);
  const double x2 = x * x;
  return x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}

/// Transition-band sizing: an explicit tau (radians) wins; otherwise tau is
/// derived as gamma times the smallest cell in-radius.
struct TransitionParams {
  std::optional<double> tau;
  double gamma = 0.3;
};

/// Fourier-domain mask of one paired Voronoi cell, in [0,1] everywhere and
/// mate-symmetric. The cell containing DC is flagged as the scaling filter;
/// its output band is the residue.
struct WaveletFilter {
  std::vector<double> mask;
  std::int32_t cell_id = 0;
  bool is_scaling = false;
};

struct FilterBank {
  int height = 0;
  int width = 0;
  std::vector<WaveletFilter> filters;
  std::vector<std::vector<double>> duals;
  std::vector<double> energy;  // per-bin sum of squared masks
  double tau = 0.0;

  double frame_lower() const { return *std::min_element(energy.begin(), energy.end()); }
  double frame_upper() const { return *std::max_element(energy.begin(), energy.end()); }
};

/// Mask of one cell from its signed distance map: 1 deep inside (D > tau),
/// 0 far outside (D < -tau), and a cosine-of-beta ramp across |D| <= tau.
inline WaveletFilter build_filter(const SignedDistanceMap& dist, double tau) {
  if (!(tau > 0.0)) throw InvalidInputError("build_filter: tau must be positive");
  WaveletFilter f;
  f.mask.resize(dist.values.size());
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    const double d = dist.values[i];
    if (d > tau) {
      f.mask[i] = 1.0;
    } else if (d < -tau) {
      f.mask[i] = 0.0;
    } else {
      f.mask[i] = std::cos(std::numbers::pi / 2.0 * meyer_beta((tau - d) / (2.0 * tau)));
    }
  }
  return f;
}

/// tau = gamma * (smallest positive in-radius over the paired cells), so
/// every filter still reaches 1 somewhere inside its own cell. Degenerate
/// partitions with no interior anywhere fall back to gamma * one grid unit.
inline double auto_tau(const std::vector<SignedDistanceMap>& class_dist_maps, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInputError("auto_tau: gamma must be in (0,1)");
  if (class_dist_maps.empty()) throw InvalidInputError("auto_tau: no distance maps");
  double min_inradius = std::numeric_limits<double>::infinity();
  for (const SignedDistanceMap& m : class_dist_maps) {
    const double r = *std::max_element(m.values.begin(), m.values.end());
    min_inradius = std::min(min_inradius, r);
  }
  if (min_inradius > 0.0) return gamma * min_inradius;
  return gamma * class_dist_maps.front().norm_factor;
}

namespace detail {

// fftshift-style rotation taking raw bin coordinates to the centered layout
// in which cells are contiguous and distances are measured.
inline FreqIndex to_centered_layout(FreqIndex idx, int height, int width) {
  return {(idx.k + (height - 1) / 2) % height, (idx.l + (width - 1) / 2) % width};
}

/// Signed distance map of one paired-cell union, computed on the centered
/// rectangle, returned in raw layout, and alias-symmetrized: even-sized axes
/// carry a double-alias Nyquist line, and taking the smaller of the two mate
/// values makes the map exactly mate-symmetric.
inline SignedDistanceMap class_distance_map(const PartitionLabels& part,
                                            const std::vector<FreqIndex>& bins_raw,
                                            const std::vector<FreqIndex>& boundary_raw,
                                            double norm_factor) {
  const int H = part.height;
  const int W = part.width;
  std::vector<FreqIndex> bins_c;
  bins_c.reserve(bins_raw.size());
  for (FreqIndex b : bins_raw) bins_c.push_back(to_centered_layout(b, H, W));
  std::vector<FreqIndex> boundary_c;
  boundary_c.reserve(boundary_raw.size());
  for (FreqIndex b : boundary_raw) boundary_c.push_back(to_centered_layout(b, H, W));

  const SignedDistanceMap centered = signed_distance(bins_c, boundary_c, H, W, norm_factor);

  SignedDistanceMap raw;
  raw.height = H;
  raw.width = W;
  raw.norm_factor = norm_factor;
  raw.cell_bins = bins_raw;
  raw.values.resize(centered.values.size());
  for (int k = 0; k < H; ++k)
    for (int l = 0; l < W; ++l)
      raw.values[flat_index({k, l}, W)] =
          centered.values[flat_index(to_centered_layout({k, l}, H, W), W)];

  for (int k = 0; k < H; ++k) {
    for (int l = 0; l < W; ++l) {
      const std::size_t i = flat_index({k, l}, W);
      const std::size_t m = flat_index(mate({k, l}, H, W), W);
      if (m <= i) continue;
      const double u = std::min(std::abs(raw.values[i]), std::abs(raw.values[m]));
      const double v = raw.values[i] >= 0.0 ? u : -u;
      raw.values[i] = v;
      raw.values[m] = v;
    }
  }
  return raw;
}

}  // namespace detail

/// All bins and the distance map of every paired-cell class, in bank order:
/// the class containing DC first, the rest by ascending canonical cell id.
struct ClassGeometry {
  std::vector<std::int32_t> class_reps;
  std::vector<SignedDistanceMap> dist_maps;
};

inline ClassGeometry build_class_geometry(const PartitionLabels& part, double norm_factor) {
  const int n = part.num_cells();
  if (n == 0) throw InvalidInputError("build_class_geometry: empty partition");
  const int H = part.height;
  const int W = part.width;

  std::vector<std::int32_t> reps;
  for (std::int32_t c = 0; c < n; ++c) {
    const std::int32_t rep = std::min(c, part.pair_of[c]);
    if (rep == c) reps.push_back(c);
  }
  const std::int32_t dc_rep = std::min(part.dc_cell, part.pair_of[part.dc_cell]);
  std::sort(reps.begin(), reps.end());
  std::erase(reps, dc_rep);
  reps.insert(reps.begin(), dc_rep);

  ClassGeometry geom;
  geom.class_reps = reps;
  for (std::int32_t rep : reps) {
    const std::int32_t pc = part.pair_of[rep];
    std::vector<FreqIndex> bins;
    for (int k = 0; k < H; ++k)
      for (int l = 0; l < W; ++l) {
        const std::int32_t lab = part.labels[flat_index({k, l}, W)];
        if (lab == rep || lab == pc) bins.push_back({k, l});
      }
    const std::vector<FreqIndex> boundary = cell_boundary(part, rep);
    geom.dist_maps.push_back(detail::class_distance_map(part, bins, boundary, norm_factor));
  }
  return geom;
}

/// One filter per paired-cell class plus the dual bank. Fails when the summed
/// spectral energy drops to zero anywhere (frame lower bound).
inline FilterBank build_bank(const PartitionLabels& part, const TransitionParams& tp) {
  FilterBank bank;
  bank.height = part.height;
  bank.width = part.width;
  const double nf = default_norm_factor(part.height, part.width);
  const ClassGeometry geom = build_class_geometry(part, nf);

  bank.tau = tp.tau.has_value() ? *tp.tau : auto_tau(geom.dist_maps, tp.gamma);
  if (!(bank.tau > 0.0)) throw InvalidInputError("build_bank: tau must be positive");

  for (std::size_t ci = 0; ci < geom.class_reps.size(); ++ci) {
    WaveletFilter f = build_filter(geom.dist_maps[ci], bank.tau);
    f.cell_id = geom.class_reps[ci];
    f.is_scaling = ci == 0;
    bank.filters.push_back(std::move(f));
  }

  const std::size_t bins = bank.filters.front().mask.size();
  bank.energy.assign(bins, 0.0);
  for (const WaveletFilter& f : bank.filters)
    for (std::size_t i = 0; i < bins; ++i) bank.energy[i] += f.mask[i] * f.mask[i];
  for (std::size_t i = 0; i < bins; ++i) {
    if (bank.energy[i] <= 1e-12) {
      const FreqIndex bad = from_flat(i, part.width);
      std::ostringstream oss;
      oss << "build_bank: frame lower bound failure at bin (" << bad.k << "," << bad.l
          << "): summed filter energy " << bank.energy[i]
          << "; try a smaller gamma (narrower transition)";
      throw FrameError(oss.str());
    }
  }

  bank.duals.reserve(bank.filters.size());
  for (const WaveletFilter& f : bank.filters) {
    std::vector<double> dual(bins);
    for (std::size_t i = 0; i < bins; ++i) dual[i] = f.mask[i] / bank.energy[i];
    bank.duals.push_back(std::move(dual));
  }
  return bank;
}

}  // namespace evw
