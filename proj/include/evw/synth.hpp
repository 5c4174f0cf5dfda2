#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "evw/grid.hpp"

namespace evw {

enum class ObjectShape { Rectangle, Ellipse };

struct ToyObject {
  ObjectShape shape = ObjectShape::Rectangle;
  double center_row = 0.0;
  double center_col = 0.0;
  double half_row = 0.0;
  double half_col = 0.0;
  double intensity = 0.0;
};

/// One harmonic mode: amplitude * cos(2*pi*(fr*r/H + fc*c/W) + phase).
/// Frequencies are in cycles per image axis and must stay below Nyquist.
struct ToyMode {
  double amplitude = 0.0;
  double freq_row = 0.0;
  double freq_col = 0.0;
  double phase = 0.0;
};

struct ToySpec {
  int height = 256;
  int width = 256;
  std::vector<ToyMode> modes;
  std::vector<ToyObject> objects;
};

/// Two piecewise-constant objects with four superimposed harmonic modes in
/// two radius classes, two orientations each.
inline ToySpec default_toy_spec() {
  ToySpec spec;
  spec.objects = {
      {ObjectShape::Rectangle, 64.0, 64.0, 40.0, 24.0, 0.5},
      {ObjectShape::Ellipse, 176.0, 160.0, 48.0, 28.0, 0.5},
  };
  spec.modes = {
      {1.0, 20.0, 8.0, 0.0},
      {1.0, 8.0, 20.0, 0.0},
      {1.0, 36.0, 14.0, 0.0},
      {1.0, 14.0, 36.0, 0.0},
  };
  return spec;
}

inline ImageGrid make_toy_image(const ToySpec& spec) {
  if (spec.height <= 0 || spec.width <= 0)
    throw InvalidInputError("make_toy_image: bad dimensions");
  for (const ToyMode& m : spec.modes) {
    if (!(std::abs(m.freq_row) < spec.height / 2.0) ||
        !(std::abs(m.freq_col) < spec.width / 2.0))
      throw InvalidInputError("make_toy_image: mode frequency at or above Nyquist");
    if (!std::isfinite(m.amplitude)) throw InvalidInputError("make_toy_image: bad amplitude");
  }

  ImageGrid img(spec.height, spec.width, 0.0);
  for (const ToyObject& obj : spec.objects) {
    for (int r = 0; r < spec.height; ++r) {
      for (int c = 0; c < spec.width; ++c) {
        const double dr = r - obj.center_row;
        const double dc = c - obj.center_col;
        bool hit = false;
        if (obj.shape == ObjectShape::Rectangle) {
          hit = std::abs(dr) <= obj.half_row && std::abs(dc) <= obj.half_col;
        } else {
          const double nr = dr / obj.half_row;
          const double nc = dc / obj.half_col;
          hit = nr * nr + nc * nc <= 1.0;
        }
        if (hit) img(r, c) += obj.intensity;
      }
    }
  }
  for (const ToyMode& m : spec.modes) {
    for (int r = 0; r < spec.height; ++r) {
      for (int c = 0; c < spec.width; ++c) {
        const double ang = 2.0 * std::numbers::pi *
                               (m.freq_row * r / spec.height + m.freq_col * c / spec.width) +
                           m.phase;
        img(r, c) += m.amplitude * std::cos(ang);
      }
    }
  }
  return img;
}

/// Single-cosine probe image.
inline ImageGrid make_pure_tone(int height, int width, double freq_row, double freq_col,
                                double amplitude) {
  ToySpec spec;
  spec.height = height;
  spec.width = width;
  spec.modes = {{amplitude, freq_row, freq_col, 0.0}};
  return make_toy_image(spec);
}

}  // namespace evw
