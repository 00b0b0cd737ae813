#pragma once

#include <string>

#include "spi/image.hpp"

namespace spi {

struct MetricValue {
  std::string name;
  double value = 0.0;
};

enum class RmseNormalization {
  mean,         // sqrt(mean((I1 - I2)^2) / mean(I1))
  mean_square,  // sqrt(mean((I1 - I2)^2) / mean(I1^2))
};

/// Normalized RMSE of an estimate against ground truth. Not symmetric: the
/// first argument supplies the normalizer.
double normalized_rmse(const Image& truth, const Image& estimate,
                       RmseNormalization norm = RmseNormalization::mean);

}  // namespace spi
