#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spi/image.hpp"
#include "spi/model.hpp"
#include "spi/results.hpp"

namespace spi {

// PGM, maxval 255. Pixel value v maps to v / 255; writing clamps to [0, 1].
enum class PgmEncoding { ascii, binary };  // P2, P5

Image decode_pgm(std::string_view bytes);
std::string encode_pgm(const Image& img, PgmEncoding encoding = PgmEncoding::binary);
Image read_image(const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path,
                 PgmEncoding encoding = PgmEncoding::binary);

// Binary bundle, all fields little-endian:
//   0  magic "SPIBNDL1"       8 bytes
//   8  kind                   u32 (0 patterns, 1 measurements)
//  12  m                      u32
//  16  n                      u32 (pixels per pattern)
//  20  seed                   u64 (generation seed, or noise seed for measurements)
//  28  sigma                  f64, measurements only
//  .. payload                 f64 x (m*n) row-major, or f64 x m
inline constexpr std::string_view kBundleMagic = "SPIBNDL1";

enum class BundleKind : std::uint32_t { patterns = 0, measurements = 1 };

struct BundleHeader {
  BundleKind kind = BundleKind::patterns;
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;

  std::size_t payload_count() const;
  std::size_t header_bytes() const;
};

struct Bundle {
  BundleHeader header;
  std::vector<double> payload;
};

std::string encode_bundle(const BundleHeader& header, std::span<const double> payload);
Bundle decode_bundle(std::string_view bytes);
Bundle read_bundle(const std::filesystem::path& path);
void write_bundle(const BundleHeader& header, std::span<const double> payload,
                  const std::filesystem::path& path);

void save_patterns(const PatternSet& patterns, const std::filesystem::path& path);
PatternSet load_patterns(const std::filesystem::path& path);

/// pixel_count is recorded in the header so a replay can check it against the patterns.
void save_measurements(const MeasurementSet& meas, std::size_t pixel_count,
                       const std::filesystem::path& path);
MeasurementSet load_measurements(const std::filesystem::path& path,
                                 std::size_t* pixel_count = nullptr);

// Sweep results CSV.
inline constexpr std::string_view kResultsHeader =
    "scene,solver,ratio,size,noise_level,repeat,rmse,iterations,wall_time_s,seed,status";

std::string format_float(double v);
std::string csv_escape(std::string_view field);
std::string format_result_row(const SweepRow& row);
std::string format_results_csv(const SweepResults& results);
SweepResults parse_results_csv(std::string_view text);
void write_results_csv(const SweepResults& results, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace spi
