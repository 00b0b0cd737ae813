#include <cmath>
#include <string>

#include "solvers/internal.hpp"
#include "spi/errors.hpp"

namespace spi {

std::size_t StopCriteria::max_iterations(std::size_t n) const {
  const double cap = std::floor(max_iterations_factor * static_cast<double>(n) + 1e-9);
  return cap < 1.0 ? 1 : static_cast<std::size_t>(cap);
}

void StopCriteria::validate(std::size_t n) const {
  if (!(residual_change_threshold >= 0.0) || !std::isfinite(residual_change_threshold)) {
    throw InvalidArgument("residual change threshold must be finite and >= 0");
  }
  if (!(max_iterations_factor > 0.0) || !std::isfinite(max_iterations_factor)) {
    throw InvalidArgument("max iteration factor must be finite and > 0");
  }
  if (n == 0) throw InvalidArgument("stop criteria need a positive pixel count");
}

void LineSearchParams::validate() const {
  if (!(alpha >= 0.01 && alpha <= 0.3)) {
    throw InvalidArgument("line search alpha must lie in [0.01, 0.3]");
  }
  if (!(beta >= 0.1 && beta <= 0.8)) {
    throw InvalidArgument("line search beta must lie in [0.1, 0.8]");
  }
}

void AlmParams::validate() const {
  if (!(mu1_init > 0.0) || !(mu2_init > 0.0)) throw InvalidArgument("ALM mu must be > 0");
  if (!(rho > 1.0)) throw InvalidArgument("ALM rho must be > 1");
  if (!(mu_max >= mu1_init && mu_max >= mu2_init)) {
    throw InvalidArgument("ALM mu_max must be >= the initial mu values");
  }
  if (!(inner_tolerance > 0.0) || inner_max_iterations == 0) {
    throw InvalidArgument("ALM inner CG settings must be positive");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::residual_change:
      return "residual_change";
    case Termination::max_iterations:
      return "max_iterations";
    case Termination::exact:
      return "exact";
  }
  return "unknown";
}

namespace detail {

void check_problem(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape) {
  if (patterns.m() == 0 || patterns.n() == 0) throw InvalidArgument("empty pattern set");
  if (meas.m() != patterns.m()) {
    throw InvalidArgument("got " + std::to_string(meas.m()) + " measurements for " +
                          std::to_string(patterns.m()) + " patterns");
  }
  if (shape.pixel_count() != patterns.n()) {
    throw InvalidArgument("image shape " + std::to_string(shape.width) + "x" +
                          std::to_string(shape.height) + " does not match " +
                          std::to_string(patterns.n()) + " pattern pixels");
  }
  if (!meas.values.allFinite()) throw InvalidArgument("measurements must be finite");
}

}  // namespace detail
}  // namespace spi
