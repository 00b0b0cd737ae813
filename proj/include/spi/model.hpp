#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "spi/image.hpp"

namespace spi {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class PatternDistribution { uniform01, binary };

PatternDistribution parse_distribution(std::string_view name);
std::string_view to_string(PatternDistribution dist);

/// The modulation matrix A, one pattern per row, with the per-pattern total
/// intensities s_i = sum_j A_ij.
struct PatternSet {
  RowMatrix rows;
  Eigen::VectorXd intensities;
  std::uint64_t seed = 0;

  std::size_t m() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(rows.cols()); }

  /// Takes ownership of an explicit matrix and fills in the intensities.
  /// Rejects negative or non-finite entries.
  static PatternSet from_rows(RowMatrix rows, std::uint64_t seed = 0);
};

struct MeasurementSet {
  Eigen::VectorXd values;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;

  std::size_t m() const { return static_cast<std::size_t>(values.size()); }
};

/// Gaussian measurement noise. The level is dimensionless: sigma = level * pixel_count.
struct NoiseModel {
  double level = 0.0;
  double sigma = 0.0;

  static NoiseModel from_level(double level, std::size_t pixel_count);
};

PatternSet generate_patterns(std::size_t m, std::size_t width, std::size_t height,
                             PatternDistribution dist, std::uint64_t seed);

/// b = A x for the vectorized scene.
MeasurementSet synthesize(const PatternSet& patterns, const Image& scene);

MeasurementSet add_noise(const MeasurementSet& meas, const NoiseModel& noise, std::uint64_t seed);

}  // namespace spi
