#include "spi/metrics.hpp"

#include <cmath>

#include "spi/errors.hpp"

namespace spi {

double normalized_rmse(const Image& truth, const Image& estimate, RmseNormalization norm) {
  if (truth.shape() != estimate.shape()) {
    throw InvalidArgument("normalized_rmse: image dimensions differ");
  }
  const auto& t = truth.data();
  const auto& e = estimate.data();
  const double count = static_cast<double>(t.size());
  if (t.empty()) throw InvalidArgument("normalized_rmse: empty image");

  double sq_err = 0.0;
  double normalizer = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = t[i] - e[i];
    sq_err += d * d;
    normalizer += norm == RmseNormalization::mean ? t[i] : t[i] * t[i];
  }
  normalizer /= count;
  if (!(normalizer > 0.0)) {
    throw InvalidArgument("normalized_rmse: ground truth mean must be positive");
  }
  return std::sqrt((sq_err / count) / normalizer);
}

}  // namespace spi
