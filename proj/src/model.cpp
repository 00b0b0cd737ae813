#include "spi/model.hpp"

#include <cmath>
#include <string>

#include "spi/errors.hpp"
#include "spi/random.hpp"

namespace spi {

PatternDistribution parse_distribution(std::string_view name) {
  if (name == "uniform01") return PatternDistribution::uniform01;
  if (name == "binary") return PatternDistribution::binary;
  throw InvalidArgument("unknown pattern distribution '" + std::string(name) +
                        "' (expected uniform01 or binary)");
}

std::string_view to_string(PatternDistribution dist) {
  return dist == PatternDistribution::binary ? "binary" : "uniform01";
}

PatternSet PatternSet::from_rows(RowMatrix rows, std::uint64_t seed) {
  if (rows.rows() == 0 || rows.cols() == 0) {
    throw InvalidArgument("pattern matrix must be non-empty");
  }
  if (!rows.allFinite() || (rows.array() < 0.0).any()) {
    throw InvalidArgument("pattern entries must be finite and non-negative");
  }
  PatternSet set;
  set.intensities = rows.rowwise().sum();
  set.rows = std::move(rows);
  set.seed = seed;
  return set;
}

NoiseModel NoiseModel::from_level(double level, std::size_t pixel_count) {
  if (!(level >= 0.0) || !std::isfinite(level)) {
    throw InvalidArgument("noise level must be finite and >= 0");
  }
  return {level, level * static_cast<double>(pixel_count)};
}

PatternSet generate_patterns(std::size_t m, std::size_t width, std::size_t height,
                             PatternDistribution dist, std::uint64_t seed) {
  const std::size_t n = width * height;
  if (m == 0 || n == 0) {
    throw InvalidArgument("pattern count and image size must be positive");
  }
  RowMatrix rows(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Rng rng(seed);
  double* out = rows.data();
  const std::size_t total = m * n;
  if (dist == PatternDistribution::uniform01) {
    for (std::size_t k = 0; k < total; ++k) out[k] = rng.uniform01();
  } else {
    for (std::size_t k = 0; k < total; ++k) out[k] = rng.bit() ? 1.0 : 0.0;
  }
  return PatternSet::from_rows(std::move(rows), seed);
}

MeasurementSet synthesize(const PatternSet& patterns, const Image& scene) {
  if (patterns.n() != scene.pixel_count()) {
    throw InvalidArgument("patterns have " + std::to_string(patterns.n()) +
                          " pixels but the scene has " + std::to_string(scene.pixel_count()));
  }
  MeasurementSet meas;
  meas.values = patterns.rows * vectorize(scene);
  return meas;
}

MeasurementSet add_noise(const MeasurementSet& meas, const NoiseModel& noise, std::uint64_t seed) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw InvalidArgument("noise sigma must be finite and >= 0");
  }
  MeasurementSet out = meas;
  out.noise_sigma = noise.sigma;
  out.noise_seed = seed;
  if (noise.sigma == 0.0) return out;
  Rng rng(seed);
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    out.values[i] += noise.sigma * rng.normal();
  }
  if (!out.values.allFinite()) {
    throw InvalidArgument("noisy measurements are not finite");
  }
  return out;
}

}  // namespace spi
