#pragma once

#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

#include "evw/errors.hpp"

namespace evw {

/// A single DFT bin position: row bin k in [0, height), column bin l in
/// [0, width). Spectra are kept in unshifted order, DC at (0, 0).
struct FreqIndex {
  int k = 0;
  int l = 0;

  friend constexpr auto operator<=>(const FreqIndex&, const FreqIndex&) = default;
};

/// Dense row-major 2D raster. ImageGrid holds real samples (the signal and
/// its wavelet coefficient bands), SpectrumGrid holds complex DFT bins.
template <typename T>
struct Grid {
  int height = 0;
  int width = 0;
  std::vector<T> data;  // data[r * width + c]

  Grid() = default;
  Grid(int h, int w, T fill = T{}) : height(h), width(w) {
    if (h <= 0 || w <= 0) throw InvalidInputError("grid dimensions must be positive");
    data.assign(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill);
  }

  std::size_t size() const { return data.size(); }

  T& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
  const T& operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * width + c];
  }

  T& at(FreqIndex idx) { return (*this)(idx.k, idx.l); }
  const T& at(FreqIndex idx) const { return (*this)(idx.k, idx.l); }

  bool same_shape(const Grid& other) const {
    return height == other.height && width == other.width;
  }
};

using ImageGrid = Grid<double>;
using SpectrumGrid = Grid<std::complex<double>>;

/// Row-major flat offset of a bin.
inline std::size_t flat_index(FreqIndex idx, int width) {
  return static_cast<std::size_t>(idx.k) * static_cast<std::size_t>(width) + idx.l;
}

inline FreqIndex from_flat(std::size_t i, int width) {
  return {static_cast<int>(i / static_cast<std::size_t>(width)),
          static_cast<int>(i % static_cast<std::size_t>(width))};
}

/// Centrally symmetric partner of a bin: ((H - k) mod H, (W - l) mod W).
/// For spectra of real images this is the conjugate bin. Involution.
inline FreqIndex mate(FreqIndex idx, int height, int width) {
  return {(height - idx.k) % height, (width - idx.l) % width};
}

/// Signed frequency representative of a raw bin coordinate, in
/// (-size/2, size/2]. Even sizes map the Nyquist bin to +size/2.
inline int centered_coord(int coord, int size) {
  return 2 * coord <= size ? coord : coord - size;
}

inline bool all_finite(const ImageGrid& img) {
  for (double v : img.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace evw
