#pragma once

#include <cstddef>
#include <vector>

#include "evw/dft.hpp"
#include "evw/filter_bank.hpp"
#include "evw/grid.hpp"
#include "evw/scale_space.hpp"
#include "evw/voronoi.hpp"

namespace evw {

struct DecomposeParams {
  ScaleSpaceParams scale_space;
  TransitionParams transition;
};

/// Result of the forward transform. Band 0 is always the scaling (DC-cell)
/// output, the residue; remaining bands follow their filters' cell ids.
/// band_imag_ratio keeps the pre-discard imaginary residue of each band.
struct EvwDecomposition {
  int height = 0;
  int width = 0;
  std::vector<ImageGrid> bands;
  std::vector<double> band_imag_ratio;
  FilterBank bank;
  SeedSet seeds;
  PartitionLabels partition;
};

namespace detail {

inline void extract_bands(const SpectrumGrid& spec, EvwDecomposition& dec) {
  for (const WaveletFilter& f : dec.bank.filters) {
    SpectrumGrid filtered(spec.height, spec.width);
    for (std::size_t i = 0; i < spec.size(); ++i)
      filtered.data[i] = spec.data[i] * f.mask[i];
    RealField rf = inverse_dft_checked(filtered);
    dec.bands.push_back(std::move(rf.image));
    dec.band_imag_ratio.push_back(rf.imag_ratio);
  }
}

}  // namespace detail

/// Fixed-bank filtering: skips detection and partitioning, hence linear in
/// the image. Used to reuse a saved bank.
inline EvwDecomposition decompose_with_bank(const ImageGrid& img, const FilterBank& bank) {
  if (img.height != bank.height || img.width != bank.width)
    throw InvalidInputError("decompose_with_bank: image and bank dimensions differ");
  if (!all_finite(img)) throw InvalidInputError("decompose_with_bank: non-finite samples");
  EvwDecomposition dec;
  dec.height = img.height;
  dec.width = img.width;
  dec.bank = bank;
  detail::extract_bands(forward_dft(img), dec);
  return dec;
}

/// Forward transform: spectrum, scale-space seed detection, Voronoi
/// partition, one band per paired-cell filter.
inline EvwDecomposition decompose(const ImageGrid& img, const DecomposeParams& params = {}) {
  if (img.height < 8 || img.width < 8)
    throw InvalidInputError("decompose: image must be at least 8x8");
  if (!all_finite(img)) throw InvalidInputError("decompose: non-finite samples");

  const SpectrumGrid spec = forward_dft(img);
  EvwDecomposition dec;
  dec.height = img.height;
  dec.width = img.width;
  dec.seeds = detect_seeds(magnitude(spec), params.scale_space);
  dec.partition = label_grid(dec.seeds, img.height, img.width);
  dec.bank = build_bank(dec.partition, params.transition);
  detail::extract_bands(spec, dec);
  return dec;
}

/// Dual-frame inverse: re-transform the (possibly edited) bands, apply the
/// dual masks, sum, invert. Exact for unmodified bands.
inline ImageGrid reconstruct(const EvwDecomposition& dec) {
  if (dec.bands.size() != dec.bank.filters.size() || dec.bands.empty())
    throw InvalidInputError("reconstruct: band/filter count mismatch");
  for (const ImageGrid& b : dec.bands)
    if (b.height != dec.bank.height || b.width != dec.bank.width)
      throw InvalidInputError("reconstruct: band dimensions do not match the bank");

  SpectrumGrid acc(dec.bank.height, dec.bank.width);
  for (std::size_t k = 0; k < dec.bands.size(); ++k) {
    const SpectrumGrid bs = forward_dft(dec.bands[k]);
    const std::vector<double>& dual = dec.bank.duals[k];
    for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += bs.data[i] * dual[i];
  }
  return inverse_dft(acc);
}

}  // namespace evw
