#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "evw/dft.hpp"
#include "evw/scale_space.hpp"
#include "evw/synth.hpp"

using namespace evw;

namespace {

// Literal 2D periodic convolution with the sampled, renormalized Gaussian,
// independent of the separable implementation path.
ImageGrid direct_gaussian(const ImageGrid& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double mass = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    taps[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
    mass += taps[t + radius];
  }
  for (double& w : taps) w /= mass;

  const int H = img.height, W = img.width;
  ImageGrid out(H, W, 0.0);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      double acc = 0.0;
      for (int tr = -radius; tr <= radius; ++tr)
        for (int tc = -radius; tc <= radius; ++tc) {
          const int rr = ((r + tr) % H + H) % H;
          const int cc = ((c + tc) % W + W) % W;
          acc += taps[tr + radius] * taps[tc + radius] * img(rr, cc);
        }
      out(r, c) = acc;
    }
  return out;
}

// Exhaustive between-class-variance maximizer over integer thresholds,
// compared as exact rational numbers.
double otsu_oracle(const std::vector<int>& lengths) {
  const int lo = *std::min_element(lengths.begin(), lengths.end());
  const int hi = *std::max_element(lengths.begin(), lengths.end());
  if (lo == hi) return static_cast<double>(lo - 1);
  __int128 best_num = -1, best_den = 1;
  int best_t = lo;
  for (int t = lo; t < hi; ++t) {
    long long n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (int v : lengths) {
      if (v <= t) {
        ++n0;
        s0 += v;
      } else {
        ++n1;
        s1 += v;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const long long a = s0 * n1 - s1 * n0;
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

double total_mass(const ImageGrid& g) {
  double m = 0.0;
  for (double v : g.data) m += v;
  return m;
}

}  // namespace

TEST_CASE("gaussian_smooth with sigma 0 is the identity") {
  ImageGrid img(16, 12);
  std::mt19937 rng(3);
  for (double& v : img.data) v = std::uniform_real_distribution<>(0.0, 5.0)(rng);
  const ImageGrid out = gaussian_smooth(img, 0.0);
  CHECK(out.data == img.data);
}

TEST_CASE("gaussian_smooth keeps constants constant") {
  ImageGrid img(10, 10, 2.5);
  for (double sigma : {0.5, 1.0, 3.0, 7.0}) {
    const ImageGrid out = gaussian_smooth(img, sigma);
    for (double v : out.data) CHECK(v == Catch::Approx(2.5).margin(1e-12));
  }
}

TEST_CASE("gaussian_smooth of an impulse equals the sampled kernel") {
  ImageGrid img(32, 32, 0.0);
  img(16, 16) = 1.0;
  const double sigma = 1.0;
  const ImageGrid out = gaussian_smooth(img, sigma);
  const ImageGrid ref = direct_gaussian(img, sigma);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out.data[i] == Catch::Approx(ref.data[i]).margin(1e-12));

  // peak equals the squared center weight of the normalized 1D kernel
  const int radius = 4;
  double mass = 0.0;
  for (int t = -radius; t <= radius; ++t) mass += std::exp(-0.5 * t * t);
  const double w0 = 1.0 / mass;
  CHECK(out(16, 16) == Catch::Approx(w0 * w0).margin(1e-12));
}

TEST_CASE("gaussian_smooth matches the direct sum when the kernel wraps") {
  ImageGrid img(8, 6, 0.0);
  img(1, 2) = 1.0;
  img(6, 5) = 0.5;
  const double sigma = 3.0;  // radius 12 exceeds both axes
  const ImageGrid out = gaussian_smooth(img, sigma);
  const ImageGrid ref = direct_gaussian(img, sigma);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out.data[i] == Catch::Approx(ref.data[i]).margin(1e-12));
}

TEST_CASE("gaussian_smooth preserves mass and nonnegativity") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int h = std::uniform_int_distribution<>(5, 40)(rng);
    const int w = std::uniform_int_distribution<>(5, 40)(rng);
    ImageGrid img(h, w);
    for (double& v : img.data) v = std::uniform_real_distribution<>(0.0, 3.0)(rng);
    const double sigma = std::uniform_real_distribution<>(0.2, 6.0)(rng);
    const ImageGrid out = gaussian_smooth(img, sigma);
    CHECK(total_mass(out) == Catch::Approx(total_mass(img)).epsilon(1e-9));
    for (double v : out.data) CHECK(v >= 0.0);
  }
}

TEST_CASE("local_maxima basics") {
  SECTION("constant image has no strict maxima") {
    ImageGrid img(9, 9, 1.0);
    CHECK(local_maxima(img, Neighborhood::EightConnected).empty());
    CHECK(local_maxima(img, Neighborhood::FourConnected).empty());
  }
  SECTION("single impulse is the only maximum") {
    ImageGrid img(9, 9, 0.0);
    img(4, 5) = 2.0;
    const auto m = local_maxima(img, Neighborhood::EightConnected);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == FreqIndex{4, 5});
  }
  SECTION("two impulses of different heights are both maxima") {
    ImageGrid img(16, 16, 0.0);
    img(2, 2) = 2.0;
    img(12, 11) = 1.0;
    const auto m = local_maxima(img, Neighborhood::EightConnected);
    REQUIRE(m.size() == 2);
    CHECK(std::count(m.begin(), m.end(), FreqIndex{2, 2}) == 1);
    CHECK(std::count(m.begin(), m.end(), FreqIndex{12, 11}) == 1);
  }
  SECTION("wrap-around neighbor suppresses an edge bin") {
    ImageGrid img(8, 8, 0.0);
    img(0, 0) = 1.0;
    img(7, 7) = 2.0;  // 8-neighbor of (0,0) through the wrap
    const auto m = local_maxima(img, Neighborhood::EightConnected);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == FreqIndex{7, 7});
  }
  SECTION("plateaus are not maxima") {
    ImageGrid img(8, 8, 0.0);
    img(3, 3) = 1.0;
    img(3, 4) = 1.0;
    CHECK(local_maxima(img, Neighborhood::EightConnected).empty());
    CHECK(local_maxima(img, Neighborhood::FourConnected).empty());
  }
}

TEST_CASE("track_maxima: a single impulse persists through every level") {
  ImageGrid img(24, 24, 0.0);
  img(7, 9) = 1.0;
  ScaleSpaceParams p;
  p.max_levels = 5;
  const auto tracks = track_maxima(img, p);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].origin == FreqIndex{7, 9});
  CHECK(tracks[0].length == 6);
}

TEST_CASE("track_maxima: constant input yields no tracks") {
  ImageGrid img(16, 16, 3.0);
  ScaleSpaceParams p;
  p.max_levels = 4;
  CHECK(track_maxima(img, p).empty());
}

TEST_CASE("track_maxima: a wide bump outlives a one-pixel spike") {
  // The spike sits on the bump's far tail; heavier smoothing absorbs it.
  ImageGrid img(32, 32, 0.0);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      const double dr = r - 10.0, dc = c - 10.0;
      img(r, c) += 10.0 * std::exp(-(dr * dr + dc * dc) / (2.0 * 9.0));
    }
  img(20, 20) += 0.5;
  ScaleSpaceParams p;
  p.max_levels = 12;
  const auto tracks = track_maxima(img, p);
  int bump_len = 0, spike_len = 0;
  for (const auto& t : tracks) {
    if (t.origin == FreqIndex{10, 10}) bump_len = t.length;
    if (t.origin == FreqIndex{20, 20}) spike_len = t.length;
  }
  REQUIRE(bump_len > 0);
  REQUIRE(spike_len > 0);
  CHECK(bump_len > spike_len);
}

TEST_CASE("otsu_threshold frozen examples") {
  CHECK(otsu_threshold({1, 1, 1, 10, 10}) == 1.0);
  CHECK(otsu_threshold({5, 5, 5, 5}) == 4.0);
  CHECK(otsu_threshold({1, 2, 8, 9}) == 2.0);
  CHECK_THROWS_AS(otsu_threshold({}), InvalidInputError);
}

TEST_CASE("otsu_threshold agrees with the exhaustive oracle on random lists") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<>(1, 50)(rng);
    std::vector<int> lengths(n);
    for (int& v : lengths) v = std::uniform_int_distribution<>(1, 40)(rng);
    CHECK(otsu_threshold(lengths) == otsu_oracle(lengths));
  }
}

TEST_CASE("detect_seeds on a tone-plus-offset spectrum keeps peaks and DC") {
  ImageGrid img = make_pure_tone(64, 64, 0.0, 16.0, 1.0);
  for (double& v : img.data) v += 1.0;  // nonzero mean puts a peak at DC
  const ImageGrid mag = magnitude(forward_dft(img));
  ScaleSpaceParams p;
  p.max_levels = 6;
  const SeedSet seeds = detect_seeds(mag, p);
  const std::set<FreqIndex> seed_set(seeds.seeds.begin(), seeds.seeds.end());
  CHECK(seed_set.contains(FreqIndex{0, 0}));
  CHECK(seed_set.contains(FreqIndex{0, 16}));
  CHECK(seed_set.contains(FreqIndex{0, 48}));
}

TEST_CASE("detect_seeds: impulse-at-DC magnitude gives the single seed (0,0)") {
  ImageGrid mag(16, 16, 0.0);
  mag(0, 0) = 256.0;
  ScaleSpaceParams p;
  p.max_levels = 4;
  const SeedSet seeds = detect_seeds(mag, p);
  REQUIRE(seeds.seeds.size() == 1);
  CHECK(seeds.seeds[0] == FreqIndex{0, 0});
}

TEST_CASE("detect_seeds output is closed under mate") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const int h = std::uniform_int_distribution<>(16, 40)(rng);
    const int w = std::uniform_int_distribution<>(16, 40)(rng);
    ImageGrid img(h, w);
    for (double& v : img.data) v = std::normal_distribution<>(0.0, 1.0)(rng);
    const ImageGrid mag = magnitude(forward_dft(img));
    const SeedSet seeds = detect_seeds(mag, ScaleSpaceParams{});
    const std::set<FreqIndex> s(seeds.seeds.begin(), seeds.seeds.end());
    for (FreqIndex i : s) CHECK(s.contains(mate(i, h, w)));
  }
}

TEST_CASE("detect_seeds rejects an all-flat magnitude with a clear error") {
  ImageGrid mag(16, 16, 1.0);
  ScaleSpaceParams p;
  p.max_levels = 3;
  CHECK_THROWS_AS(detect_seeds(mag, p), DetectionError);
  CHECK_THROWS_WITH(detect_seeds(mag, p),
                    Catch::Matchers::ContainsSubstring("no meaningful modes detected"));
}

TEST_CASE("maxima count is non-increasing across the produced levels") {
  ImageGrid img = make_pure_tone(48, 48, 8.0, 4.0, 1.0);
  for (double& v : img.data) v += 0.5;
  const ImageGrid mag = magnitude(forward_dft(img));
  ScaleSpaceParams p;
  p.max_levels = 8;
  std::size_t prev = local_maxima(mag, p.neighborhood).size();
  for (int level = 1; level <= p.max_levels; ++level) {
    const std::size_t count =
        local_maxima(gaussian_smooth(mag, level * p.scale_step), p.neighborhood).size();
    CHECK(count <= prev);
    prev = count;
  }
}
