#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include "evw/grid.hpp"

namespace evw {

enum class Neighborhood { FourConnected, EightConnected };

/// Scale-space sampling: level i smooths with sigma_i = i * scale_step,
/// i = 0..max_levels. max_levels <= 0 requests the automatic default
/// ceil(min(H, W) / 4).
struct ScaleSpaceParams {
  double scale_step = 0.5;
  int max_levels = 0;
  Neighborhood neighborhood = Neighborhood::EightConnected;
};

inline int resolved_max_levels(const ScaleSpaceParams& p, int height, int width) {
  if (p.max_levels > 0) return p.max_levels;
  return static_cast<int>(std::ceil(std::min(height, width) / 4.0));
}

/// One detected spectral maximum followed through the scale levels. length
/// counts consecutive levels at which the maximum persists, level 0 included.
struct MaximaTrack {
  FreqIndex origin;
  int length = 1;
};

/// Detected mode positions plus the persistence threshold that selected them.
struct SeedSet {
  std::vector<FreqIndex> seeds;
  double threshold = 0.0;
  std::vector<MaximaTrack> all_tracks;
};

namespace detail {

// Normalized 1D Gaussian taps at integer offsets [-radius, radius], folded
// into a periodic kernel when wider than the axis.
inline std::vector<double> periodic_gaussian_kernel(double sigma, int n, int& radius_out) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double mass = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    const double w = std::exp(-0.5 * (double(t) / sigma) * (double(t) / sigma));
    taps[t + radius] = w;
    mass += w;
  }
  for (double& w : taps) w /= mass;
  if (2 * radius + 1 <= n) {
    radius_out = radius;
    return taps;
  }
  // fold aliased taps onto the ring of length n
  std::vector<double> folded(n, 0.0);
  for (int t = -radius; t <= radius; ++t) folded[((t % n) + n) % n] += taps[t + radius];
  radius_out = -1;
  return folded;
}

inline void smooth_lines(const std::vector<double>& in, std::vector<double>& out, int lines,
                         int n, std::size_t line_stride, std::size_t elem_stride,
                         const std::vector<double>& kernel, int radius) {
  for (int li = 0; li < lines; ++li) {
    const std::size_t base = static_cast<std::size_t>(li) * line_stride;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      if (radius >= 0) {
        for (int t = -radius; t <= radius; ++t) {
          int j = i + t;
          if (j < 0) j += n;
          else if (j >= n) j -= n;
          acc += kernel[t + radius] * in[base + static_cast<std::size_t>(j) * elem_stride];
        }
      } else {
        for (int s = 0; s < n; ++s) {
          int j = i + s;
          if (j >= n) j -= n;
          acc += kernel[s] * in[base + static_cast<std::size_t>(j) * elem_stride];
        }
      }
      out[base + static_cast<std::size_t>(i) * elem_stride] = acc;
    }
  }
}

}  // namespace detail

/// Periodic Gaussian smoothing of a (spectral) raster. sigma = 0 is the
/// identity; the kernel is sampled at integer offsets, truncated at
/// ceil(4*sigma) and renormalized, so total mass is preserved.
inline ImageGrid gaussian_smooth(const ImageGrid& mag, double sigma) {
  if (sigma < 0.0) throw InvalidInputError("gaussian_smooth: negative sigma");
  if (sigma == 0.0) return mag;
  const int H = mag.height;
  const int W = mag.width;
  int radius = 0;
  ImageGrid tmp(H, W);
  ImageGrid out(H, W);
  const std::vector<double> krow = detail::periodic_gaussian_kernel(sigma, W, radius);
  detail::smooth_lines(mag.data, tmp.data, H, W, static_cast<std::size_t>(W), 1, krow, radius);
  const std::vector<double> kcol = detail::periodic_gaussian_kernel(sigma, H, radius);
  detail::smooth_lines(tmp.data, out.data, W, H, 1, static_cast<std::size_t>(W), kcol, radius);
  return out;
}

/// Bins strictly greater than every neighbor (periodic wrap). Plateaus are
/// never maxima. Returned in row-major order.
inline std::vector<FreqIndex> local_maxima(const ImageGrid& g, Neighborhood nb) {
  static constexpr int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static constexpr int dr4[] = {-1, 0, 0, 1};
  static constexpr int dc4[] = {0, -1, 1, 0};
  const bool eight = nb == Neighborhood::EightConnected;
  const int count = eight ? 8 : 4;
  const int* dr = eight ? dr8 : dr4;
  const int* dc = eight ? dc8 : dc4;
  const int H = g.height;
  const int W = g.width;
  std::vector<FreqIndex> maxima;
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      const double v = g(r, c);
      bool is_max = true;
      for (int t = 0; t < count && is_max; ++t) {
        const int rr = (r + dr[t] + H) % H;
        const int cc = (c + dc[t] + W) % W;
        if (!(rr == r && cc == c) && g(rr, cc) >= v) is_max = false;
      }
      if (is_max) maxima.push_back({r, c});
    }
  }
  return maxima;
}

namespace detail {

inline int periodic_axis_dist(int a, int b, int n) {
  const int d = std::abs(a - b);
  return std::min(d, n - d);
}

inline int chebyshev_periodic(FreqIndex a, FreqIndex b, int h, int w) {
  return std::max(periodic_axis_dist(a.k, b.k, h), periodic_axis_dist(a.l, b.l, w));
}

}  // namespace detail

/// Follow every level-0 maximum through increasingly smoothed versions of the
/// magnitude spectrum. A track survives level i if some level-i maximum lies
/// within Chebyshev distance ceil(sigma_i)+1 of its last position; maxima are
/// assigned greedily by distance, one track per maximum.
inline std::vector<MaximaTrack> track_maxima(const ImageGrid& mag, const ScaleSpaceParams& p) {
  if (p.scale_step <= 0.0) throw InvalidInputError("track_maxima: scale_step must be positive");
  const int levels = resolved_max_levels(p, mag.height, mag.width);
  if (levels < 2) throw InvalidInputError("track_maxima: max_levels must be >= 2");

  struct State {
    FreqIndex origin;
    FreqIndex last;
    int length = 1;
    bool alive = true;
  };
  std::vector<State> tracks;
  for (FreqIndex m : local_maxima(mag, p.neighborhood))
    tracks.push_back({m, m, 1, true});

  struct Cand {
    int dist;
    std::size_t track;
    std::size_t max;
  };
  for (int level = 1; level <= levels && !tracks.empty(); ++level) {
    const double sigma = level * p.scale_step;
    const ImageGrid smoothed = gaussian_smooth(mag, sigma);
    const std::vector<FreqIndex> maxima = local_maxima(smoothed, p.neighborhood);
    const int radius = static_cast<int>(std::ceil(sigma)) + 1;

    std::vector<Cand> cands;
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      if (!tracks[t].alive) continue;
      for (std::size_t m = 0; m < maxima.size(); ++m) {
        const int d =
            detail::chebyshev_periodic(tracks[t].last, maxima[m], mag.height, mag.width);
        if (d <= radius) cands.push_back({d, t, m});
      }
    }
    std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      const auto ta = flat_index(tracks[a.track].origin, mag.width);
      const auto tb = flat_index(tracks[b.track].origin, mag.width);
      if (ta != tb) return ta < tb;
      return flat_index(maxima[a.max], mag.width) < flat_index(maxima[b.max], mag.width);
    });

    std::vector<char> track_used(tracks.size(), 0);
    std::vector<char> max_used(maxima.size(), 0);
    for (const Cand& c : cands) {
      if (track_used[c.track] || max_used[c.max]) continue;
      track_used[c.track] = 1;
      max_used[c.max] = 1;
      tracks[c.track].last = maxima[c.max];
      ++tracks[c.track].length;
    }
    for (std::size_t t = 0; t < tracks.size(); ++t)
      if (tracks[t].alive && !track_used[t]) tracks[t].alive = false;
  }

  std::vector<MaximaTrack> out;
  out.reserve(tracks.size());
  for (const State& s : tracks) out.push_back({s.origin, s.length});
  return out;
}

/// Otsu threshold over the exact integer histogram of persistence lengths.
/// Maximizes between-class variance; ties resolve to the smallest threshold.
/// All-equal input returns value-1 so that every track stays above threshold.
inline double otsu_threshold(const std::vector<int>& lengths) {
  if (lengths.empty()) throw InvalidInputError("otsu_threshold: empty length list");
  const auto [lo_it, hi_it] = std::minmax_element(lengths.begin(), lengths.end());
  const int lo = *lo_it;
  const int hi = *hi_it;
  if (lo == hi) return static_cast<double>(lo - 1);

  const std::int64_t n = static_cast<std::int64_t>(lengths.size());
  std::int64_t total = 0;
  for (int v : lengths) total += v;

  // Between-class variance for split at T is (S0*n1 - S1*n0)^2 / (n^2*n0*n1);
  // compared exactly via cross-multiplication in 128-bit integers.
  __int128 best_num = -1;
  __int128 best_den = 1;
  int best_t = lo;
  std::vector<int> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t n0 = 0, s0 = 0;
  std::size_t i = 0;
  for (int t = lo; t < hi; ++t) {
    while (i < sorted.size() && sorted[i] <= t) {
      ++n0;
      s0 += sorted[i];
      ++i;
    }
    const std::int64_t n1 = n - n0;
    if (n0 == 0 || n1 == 0) continue;
    const std::int64_t s1 = total - s0;
    const std::int64_t a = s0 * n1 - s1 * n0;
    const __int128 num = static_cast<__int128>(a) * a;
    const __int128 den = static_cast<__int128>(n0) * n1;
    if (num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return static_cast<double>(best_t);
}

/// Full detection pipeline: track maxima across scales, threshold persistence
/// lengths with Otsu, keep the long tracks, then close the set under the mate
/// map so real-image symmetry survives detection noise. The DC bin is always
/// a seed: its cell is the scaling region that extracts the residue, and as a
/// self-paired cell it also anchors the self-mate bins of the partition.
inline SeedSet detect_seeds(const ImageGrid& mag, const ScaleSpaceParams& p) {
  for (double v : mag.data)
    if (!(v >= 0.0)) throw InvalidInputError("detect_seeds: magnitude must be nonnegative");

  SeedSet out;
  out.all_tracks = track_maxima(mag, p);
  if (out.all_tracks.empty())
    throw DetectionError("no meaningful modes detected: spectrum has no strict local maxima");

  std::vector<int> lengths;
  lengths.reserve(out.all_tracks.size());
  for (const MaximaTrack& t : out.all_tracks) lengths.push_back(t.length);
  out.threshold = otsu_threshold(lengths);

  // Maxima at the floating-point noise floor of exact synthetic spectra can
  // persist through every level (smoothing never reaches the empty regions
  // around them); they carry no energy and are not modes.
  const double floor = 1e-8 * *std::max_element(mag.data.begin(), mag.data.end());
  std::set<FreqIndex> kept;
  for (const MaximaTrack& t : out.all_tracks)
    if (t.length > out.threshold && mag.at(t.origin) >= floor) kept.insert(t.origin);
  if (kept.empty()) {
    std::ostringstream oss;
    oss << "no meaningful modes detected: all " << out.all_tracks.size()
        << " tracks fall below persistence threshold " << out.threshold << "; lengths:";
    for (std::size_t i = 0; i < out.all_tracks.size() && i < 16; ++i)
      oss << ' ' << out.all_tracks[i].length;
    throw DetectionError(oss.str());
  }

  std::set<FreqIndex> closed = kept;
  for (FreqIndex s : kept) closed.insert(mate(s, mag.height, mag.width));
  closed.insert(FreqIndex{0, 0});
  out.seeds.assign(closed.begin(), closed.end());
  return out;
}

}  // namespace evw
