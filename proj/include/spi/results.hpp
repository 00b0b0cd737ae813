#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spi/image.hpp"

namespace spi {

struct SweepRow {
  std::string scene;
  std::string solver;
  double ratio = 0.0;
  ImageShape size;
  double noise_level = 0.0;
  std::size_t repeat = 0;
  std::optional<double> rmse;  // empty when the cell failed
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "failed:<reason>"

  bool ok() const { return rmse.has_value(); }
};

struct SweepResults {
  std::vector<SweepRow> rows;
};

}  // namespace spi
