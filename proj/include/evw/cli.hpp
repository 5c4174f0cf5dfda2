#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evw/bundle.hpp"
#include "evw/synth.hpp"
#include "evw/transform.hpp"

namespace evw::cli {

enum class Command { Decompose, Reconstruct, Partition, Synth, Info };

/// Exit codes of run(): 0 success, 2 invalid input, 3 detection failure,
/// 4 frame failure, 5 I/O error.
struct CliConfig {
  Command command = Command::Info;
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<double> tau;  // radians; explicit tau wins over gamma
  double gamma = 0.3;
  double scale_step = 0.5;
  std::optional<int> max_levels;
  std::optional<std::filesystem::path> seed_file;
  std::optional<std::filesystem::path> bank_dir;
};

namespace detail {

inline DecomposeParams decompose_params(const CliConfig& cfg) {
  DecomposeParams p;
  p.scale_space.scale_step = cfg.scale_step;
  p.scale_space.max_levels = cfg.max_levels.value_or(0);
  p.transition.tau = cfg.tau;
  p.transition.gamma = cfg.gamma;
  return p;
}

inline void write_image_by_extension(const std::filesystem::path& path, const ImageGrid& img) {
  if (path.extension() == ".pgm") {
    // PGM output rescales to the full 16-bit range
    const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    std::vector<std::uint16_t> px(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
      px[i] = span > 0.0 ? static_cast<std::uint16_t>(
                               std::lround((img.data[i] - lo) / span * 65535.0))
                         : 0;
    write_pgm(path, px, img.height, img.width, 65535);
  } else {
    write_pfm(path, img);
  }
}

inline SeedSet seed_set_from_file(const std::filesystem::path& path, int height, int width) {
  SeedSet ss;
  std::set<FreqIndex> closed;
  for (FreqIndex s : read_seed_file(path)) {
    if (s.k < 0 || s.k >= height || s.l < 0 || s.l >= width)
      throw InvalidInputError("seed out of range for this image: (" + std::to_string(s.k) +
                              "," + std::to_string(s.l) + ")");
    closed.insert(s);
    closed.insert(mate(s, height, width));
  }
  ss.seeds.assign(closed.begin(), closed.end());
  return ss;
}

inline void warn_imag_residue(const EvwDecomposition& dec) {
  for (std::size_t k = 0; k < dec.band_imag_ratio.size(); ++k)
    if (dec.band_imag_ratio[k] > 1e-9)
      std::cerr << "warning: band " << k << " imaginary residue ratio "
                << dec.band_imag_ratio[k] << " exceeds 1e-9\n";
}

inline BundleManifest manifest_for(const CliConfig& cfg, const EvwDecomposition& dec) {
  BundleManifest m;
  m.height = dec.height;
  m.width = dec.width;
  m.num_bands = static_cast<int>(dec.bands.size());
  m.tau = dec.bank.tau;
  m.gamma = cfg.gamma;
  m.scale_step = cfg.scale_step;
  m.max_levels = cfg.max_levels.value_or(
      resolved_max_levels(ScaleSpaceParams{}, dec.height, dec.width));
  m.dc_band_index = 0;
  return m;
}

inline int cmd_synth(const CliConfig& cfg) {
  write_image_by_extension(cfg.output, make_toy_image(default_toy_spec()));
  std::cout << "wrote toy image to " << cfg.output.string() << "\n";
  return 0;
}

inline int cmd_decompose(const CliConfig& cfg) {
  const ImageGrid img = read_image(cfg.input);
  EvwDecomposition dec;
  BundleManifest manifest;
  if (cfg.bank_dir) {
    const LoadedBundle lb = read_bundle(*cfg.bank_dir);
    dec = decompose_with_bank(img, lb.dec.bank);
    manifest = lb.manifest;
    write_bundle(cfg.output, dec, manifest);
    for (const char* name : {"partition.pgm", "seeds.csv"}) {
      std::error_code ec;
      if (std::filesystem::exists(*cfg.bank_dir / name))
        std::filesystem::copy_file(*cfg.bank_dir / name, cfg.output / name,
                                   std::filesystem::copy_options::overwrite_existing, ec);
    }
  } else if (cfg.seed_file) {
    const SeedSet ss = seed_set_from_file(*cfg.seed_file, img.height, img.width);
    const PartitionLabels part = label_grid(ss, img.height, img.width);
    const FilterBank bank = build_bank(part, decompose_params(cfg).transition);
    dec = decompose_with_bank(img, bank);
    dec.partition = part;
    dec.seeds = ss;
    manifest = manifest_for(cfg, dec);
    write_bundle(cfg.output, dec, manifest);
  } else {
    dec = decompose(img, decompose_params(cfg));
    manifest = manifest_for(cfg, dec);
    write_bundle(cfg.output, dec, manifest);
  }
  warn_imag_residue(dec);
  std::cout << "wrote bundle (" << dec.bands.size() << " bands) to " << cfg.output.string()
            << "\n";
  return 0;
}

inline int cmd_reconstruct(const CliConfig& cfg) {
  const LoadedBundle lb = read_bundle(cfg.input);
  write_image_by_extension(cfg.output, reconstruct(lb.dec));
  std::cout << "wrote reconstruction to " << cfg.output.string() << "\n";
  return 0;
}

inline int cmd_partition(const CliConfig& cfg) {
  const ImageGrid img = read_image(cfg.input);
  const SpectrumGrid spec = forward_dft(img);
  const ImageGrid mag = magnitude(spec);
  const DecomposeParams params = decompose_params(cfg);
  const SeedSet seeds = cfg.seed_file
                            ? seed_set_from_file(*cfg.seed_file, img.height, img.width)
                            : detect_seeds(mag, params.scale_space);
  const PartitionLabels part = label_grid(seeds, img.height, img.width);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) throw IoError("cannot create output directory: " + cfg.output.string());
  write_partition_pgm(cfg.output / "partition.pgm", part);
  write_seeds_csv(cfg.output / "seeds.csv", part);

  // centered log-magnitude with white cell edges, 8-bit
  const int H = img.height;
  const int W = img.width;
  std::vector<double> logm(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i) logm[i] = std::log1p(mag.data[i]);
  const double hi = *std::max_element(logm.begin(), logm.end());
  std::vector<std::uint16_t> view(mag.size(), 0);
  const int off_r = (H - 1) / 2;
  const int off_c = (W - 1) / 2;
  auto raw_at = [&](int jr, int jc) {
    return flat_index({(jr - off_r + H) % H, (jc - off_c + W) % W}, W);
  };
  for (int jr = 0; jr < H; ++jr)
    for (int jc = 0; jc < W; ++jc) {
      const std::size_t i = flat_index({jr, jc}, W);
      view[i] = hi > 0.0 ? static_cast<std::uint16_t>(
                               std::lround(logm[raw_at(jr, jc)] / hi * 254.0))
                         : 0;
      const std::int32_t lab = part.labels[raw_at(jr, jc)];
      const bool edge =
          (jr + 1 < H && part.labels[raw_at(jr + 1, jc)] != lab) ||
          (jc + 1 < W && part.labels[raw_at(jr, jc + 1)] != lab);
      if (edge) view[i] = 255;
    }
  write_pgm(cfg.output / "partition_overlay.pgm", view, H, W, 255);
  std::cout << "wrote partition (" << part.num_cells() << " cells) to "
            << cfg.output.string() << "\n";
  return 0;
}

inline int cmd_info(const CliConfig& cfg) {
  const LoadedBundle lb = read_bundle(cfg.input);
  const BundleManifest& m = lb.manifest;
  std::cout << "version=" << m.version << "\n"
            << "height=" << m.height << "\n"
            << "width=" << m.width << "\n"
            << "num_bands=" << m.num_bands << "\n"
            << "tau=" << evw::detail::format_double(m.tau) << "\n"
            << "gamma=" << evw::detail::format_double(m.gamma) << "\n"
            << "scale_step=" << evw::detail::format_double(m.scale_step) << "\n"
            << "max_levels=" << m.max_levels << "\n"
            << "dc_band_index=" << m.dc_band_index << "\n"
            << "frame_lower_bound=" << evw::detail::format_double(lb.dec.bank.frame_lower())
            << "\n"
            << "frame_upper_bound=" << evw::detail::format_double(lb.dec.bank.frame_upper())
            << "\n";
  return 0;
}

}  // namespace detail

/// Executes one CLI command, translating library errors to exit codes and
/// messages on stderr.
inline int run(const CliConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::Synth: return detail::cmd_synth(cfg);
      case Command::Decompose: return detail::cmd_decompose(cfg);
      case Command::Reconstruct: return detail::cmd_reconstruct(cfg);
      case Command::Partition: return detail::cmd_partition(cfg);
      case Command::Info: return detail::cmd_info(cfg);
    }
    std::cerr << "error: unknown command\n";
    return 2;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DetectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const FrameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace evw::cli
