#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "evw/grid.hpp"

namespace evw {

namespace detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 Cooley-Tukey, in place, unnormalized. `sign` is the
/// exponent sign: -1 for the forward transform, +1 for the inverse.
inline void fft_radix2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> twiddle;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    twiddle.resize(half);
    for (std::size_t j = 0; j < half; ++j)
      twiddle[j] = {std::cos(ang * static_cast<double>(j)),
                    std::sin(ang * static_cast<double>(j))};
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + half] * twiddle[j];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

/// Bluestein chirp-z for arbitrary lengths. Expresses the length-n DFT as a
/// circular convolution of length m = next power of two >= 2n-1.
inline void fft_bluestein(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  // chirp[j] = exp(sign * i * pi * j^2 / n); reduce j^2 mod 2n first so the
  // angle stays small and accurate for large j.
  std::vector<cplx> chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j2 = (j * j) % (2 * n);
    const double ang = sign * std::numbers::pi * static_cast<double>(j2) /
                       static_cast<double>(n);
    chirp[j] = {std::cos(ang), std::sin(ang)};
  }

  std::vector<cplx> x(m, cplx{});
  std::vector<cplx> y(m, cplx{});
  for (std::size_t j = 0; j < n; ++j) x[j] = a[j] * chirp[j];
  y[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) y[j] = y[m - j] = std::conj(chirp[j]);

  fft_radix2(x, -1);
  fft_radix2(y, -1);
  for (std::size_t i = 0; i < m; ++i) x[i] *= y[i];
  fft_radix2(x, +1);

  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j] * inv_m;
}

inline void fft_1d(std::vector<cplx>& a, int sign) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size()))
    fft_radix2(a, sign);
  else
    fft_bluestein(a, sign);
}

/// Row-column 2D transform over a flat row-major buffer, unnormalized.
inline void fft_2d(std::vector<cplx>& data, int height, int width, int sign) {
  std::vector<cplx> line;
  line.resize(static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) {
    const std::size_t off = static_cast<std::size_t>(r) * width;
    std::copy_n(data.begin() + off, width, line.begin());
    fft_1d(line, sign);
    std::copy_n(line.begin(), width, data.begin() + off);
  }
  line.resize(static_cast<std::size_t>(height));
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) line[r] = data[static_cast<std::size_t>(r) * width + c];
    fft_1d(line, sign);
    for (int r = 0; r < height; ++r) data[static_cast<std::size_t>(r) * width + c] = line[r];
  }
}

}  // namespace detail

/// Unnormalized 2D DFT of a real image; bin (0,0) is DC.
inline SpectrumGrid forward_dft(const ImageGrid& img) {
  if (img.height <= 0 || img.width <= 0 || img.data.empty())
    throw InvalidInputError("forward_dft: zero-sized image");
  if (!all_finite(img)) throw InvalidInputError("forward_dft: non-finite samples");
  SpectrumGrid spec(img.height, img.width);
  for (std::size_t i = 0; i < img.size(); ++i) spec.data[i] = {img.data[i], 0.0};
  detail::fft_2d(spec.data, spec.height, spec.width, -1);
  return spec;
}

/// Real part of the inverse DFT plus the size of the discarded imaginary
/// residue relative to the real amplitude. A conjugate-symmetric spectrum
/// gives imag_ratio near machine epsilon; values above ~1e-9 mean the input
/// was not the spectrum of a real image.
struct RealField {
  ImageGrid image;
  double imag_ratio = 0.0;
};

inline RealField inverse_dft_checked(const SpectrumGrid& spec) {
  if (spec.height <= 0 || spec.width <= 0 || spec.data.empty())
    throw InvalidInputError("inverse_dft: zero-sized spectrum");
  std::vector<detail::cplx> buf = spec.data;
  detail::fft_2d(buf, spec.height, spec.width, +1);
  const double scale = 1.0 / (static_cast<double>(spec.height) * spec.width);
  RealField out;
  out.image = ImageGrid(spec.height, spec.width);
  double max_im = 0.0;
  double max_re = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const detail::cplx v = buf[i] * scale;
    out.image.data[i] = v.real();
    max_im = std::max(max_im, std::abs(v.imag()));
    max_re = std::max(max_re, std::abs(v.real()));
  }
  out.imag_ratio = max_re > 0.0 ? max_im / max_re : (max_im > 0.0 ? 1.0 : 0.0);
  return out;
}

inline ImageGrid inverse_dft(const SpectrumGrid& spec) {
  return inverse_dft_checked(spec).image;
}

/// Pointwise complex modulus, |f^|.
inline ImageGrid magnitude(const SpectrumGrid& spec) {
  ImageGrid mag(spec.height, spec.width);
  for (std::size_t i = 0; i < spec.size(); ++i) mag.data[i] = std::abs(spec.data[i]);
  return mag;
}

}  // namespace evw
