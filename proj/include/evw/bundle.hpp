#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "evw/image_io.hpp"
#include "evw/transform.hpp"

namespace evw {

/// Metadata of a coefficient bundle directory.
struct BundleManifest {
  int version = 1;
  int height = 0;
  int width = 0;
  int num_bands = 0;
  double tau = 0.0;
  double gamma = 0.0;
  double scale_step = 0.0;
  int max_levels = 0;
  int dc_band_index = 0;
};

namespace detail {

inline std::string band_name(int k) { return "band_" + std::to_string(k) + ".pfm"; }
inline std::string filter_name(int k) { return "filter_" + std::to_string(k) + ".pfm"; }

inline ImageGrid mask_as_grid(const std::vector<double>& mask, int height, int width) {
  ImageGrid g(height, width);
  g.data.assign(mask.begin(), mask.end());
  return g;
}

}  // namespace detail

inline void write_manifest_file(const std::filesystem::path& dir, const BundleManifest& m) {
  write_manifest(dir / "manifest.txt",
                 {{"version", std::to_string(m.version)},
                  {"height", std::to_string(m.height)},
                  {"width", std::to_string(m.width)},
                  {"num_bands", std::to_string(m.num_bands)},
                  {"tau", detail::format_double(m.tau)},
                  {"gamma", detail::format_double(m.gamma)},
                  {"scale_step", detail::format_double(m.scale_step)},
                  {"max_levels", std::to_string(m.max_levels)},
                  {"dc_band_index", std::to_string(m.dc_band_index)}});
}

inline BundleManifest read_manifest_file(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.txt";
  if (!std::filesystem::exists(path))
    throw InvalidInputError("bundle is missing manifest.txt: " + path.string());
  const std::map<std::string, std::string> kv = read_manifest(path);
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidInputError("manifest is missing key '" + key + "'");
    return it->second;
  };
  BundleManifest m;
  m.version = static_cast<int>(detail::parse_long(need("version")));
  m.height = static_cast<int>(detail::parse_long(need("height")));
  m.width = static_cast<int>(detail::parse_long(need("width")));
  m.num_bands = static_cast<int>(detail::parse_long(need("num_bands")));
  m.tau = detail::parse_double(need("tau"));
  m.gamma = detail::parse_double(need("gamma"));
  m.scale_step = detail::parse_double(need("scale_step"));
  m.max_levels = static_cast<int>(detail::parse_long(need("max_levels")));
  m.dc_band_index = static_cast<int>(detail::parse_long(need("dc_band_index")));
  if (m.height <= 0 || m.width <= 0 || m.num_bands <= 0)
    throw InvalidInputError("manifest has bad dimensions or band count");
  return m;
}

inline void write_seeds_csv(const std::filesystem::path& path, const PartitionLabels& part) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "cell_id,row,col,pair_id\n";
  for (int c = 0; c < part.num_cells(); ++c)
    out << c << "," << part.seed_of[c].k << "," << part.seed_of[c].l << ","
        << part.pair_of[c] << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

/// Seed list for --seed-file: accepts the seeds.csv layout
/// (cell_id,row,col,pair_id) or bare `row,col` lines; a header line is
/// skipped.
inline std::vector<FreqIndex> read_seed_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<FreqIndex> seeds;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.starts_with("#")) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    if (!fields.empty() && fields[0] == "cell_id") continue;  // header
    try {
      if (fields.size() >= 4) {
        seeds.push_back({static_cast<int>(detail::parse_long(fields[1])),
                         static_cast<int>(detail::parse_long(fields[2]))});
      } else if (fields.size() == 2) {
        seeds.push_back({static_cast<int>(detail::parse_long(fields[0])),
                         static_cast<int>(detail::parse_long(fields[1]))});
      } else {
        throw IoError("");
      }
    } catch (const IoError&) {
      throw InvalidInputError("malformed seed line: '" + line + "' in " + path.string());
    }
  }
  if (seeds.empty()) throw InvalidInputError("seed file has no seeds: " + path.string());
  return seeds;
}

inline void write_partition_pgm(const std::filesystem::path& path, const PartitionLabels& part) {
  if (part.num_cells() > 65536)
    throw InvalidInputError("write_partition_pgm: more than 65536 cells");
  std::vector<std::uint16_t> px(part.labels.size());
  for (std::size_t i = 0; i < part.labels.size(); ++i)
    px[i] = static_cast<std::uint16_t>(part.labels[i]);
  write_pgm(path, px, part.height, part.width, 65535);
}

/// Writes a coefficient bundle: manifest, per-band and per-filter PFM
/// rasters, plus partition.pgm and seeds.csv when a partition is present
/// (a bank-reuse decomposition carries none).
inline void write_bundle(const std::filesystem::path& dir, const EvwDecomposition& dec,
                         const BundleManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create bundle directory: " + dir.string());

  write_manifest_file(dir, manifest);
  for (std::size_t k = 0; k < dec.bands.size(); ++k) {
    write_pfm(dir / detail::band_name(static_cast<int>(k)), dec.bands[k]);
    write_pfm(dir / detail::filter_name(static_cast<int>(k)),
              detail::mask_as_grid(dec.bank.filters[k].mask, dec.height, dec.width));
  }
  if (dec.partition.num_cells() > 0) {
    write_partition_pgm(dir / "partition.pgm", dec.partition);
    write_seeds_csv(dir / "seeds.csv", dec.partition);
  }
}

/// A bundle loaded back from disk: bands plus a bank rebuilt from the stored
/// filter masks (energy and duals recomputed, so reconstruction is exact for
/// the stored masks).
struct LoadedBundle {
  BundleManifest manifest;
  EvwDecomposition dec;
};

inline LoadedBundle read_bundle(const std::filesystem::path& dir) {
  LoadedBundle lb;
  lb.manifest = read_manifest_file(dir);
  const int n = lb.manifest.num_bands;
  const int H = lb.manifest.height;
  const int W = lb.manifest.width;

  lb.dec.height = H;
  lb.dec.width = W;
  lb.dec.bank.height = H;
  lb.dec.bank.width = W;
  lb.dec.bank.tau = lb.manifest.tau;

  for (int k = 0; k < n; ++k) {
    for (const std::string& name : {detail::band_name(k), detail::filter_name(k)}) {
      if (!std::filesystem::exists(dir / name))
        throw InvalidInputError("bundle is missing file: " + (dir / name).string());
    }
    ImageGrid band = read_pfm(dir / detail::band_name(k));
    ImageGrid mask = read_pfm(dir / detail::filter_name(k));
    if (band.height != H || band.width != W || mask.height != H || mask.width != W)
      throw InvalidInputError("bundle raster dimensions disagree with manifest: " +
                              detail::band_name(k));
    WaveletFilter f;
    f.mask = mask.data;
    f.cell_id = k;
    f.is_scaling = k == lb.manifest.dc_band_index;
    lb.dec.bank.filters.push_back(std::move(f));
    lb.dec.bands.push_back(std::move(band));
    lb.dec.band_imag_ratio.push_back(0.0);
  }

  const std::size_t bins = static_cast<std::size_t>(H) * W;
  lb.dec.bank.energy.assign(bins, 0.0);
  for (const WaveletFilter& f : lb.dec.bank.filters)
    for (std::size_t i = 0; i < bins; ++i) lb.dec.bank.energy[i] += f.mask[i] * f.mask[i];
  for (std::size_t i = 0; i < bins; ++i)
    if (lb.dec.bank.energy[i] <= 1e-12)
      throw FrameError("bundle filters violate the frame lower bound at bin " +
                       std::to_string(i));
  for (const WaveletFilter& f : lb.dec.bank.filters) {
    std::vector<double> dual(bins);
    for (std::size_t i = 0; i < bins; ++i) dual[i] = f.mask[i] / lb.dec.bank.energy[i];
    lb.dec.bank.duals.push_back(std::move(dual));
  }
  return lb;
}

}  // namespace evw
