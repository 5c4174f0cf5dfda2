#pragma once

// Empirical Voronoi wavelet transform: data-adaptive 2D wavelet filter banks
// built from a Voronoi partition of the Fourier plane, with a dual-frame
// inverse giving perfect reconstruction.

#include "evw/bundle.hpp"
#include "evw/cli.hpp"
#include "evw/dft.hpp"
#include "evw/distance_transform.hpp"
#include "evw/errors.hpp"
#include "evw/filter_bank.hpp"
#include "evw/grid.hpp"
#include "evw/image_io.hpp"
#include "evw/scale_space.hpp"
#include "evw/synth.hpp"
#include "evw/transform.hpp"
#include "evw/voronoi.hpp"
