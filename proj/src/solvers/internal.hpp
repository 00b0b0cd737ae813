#pragma once

#include <chrono>
#include <cmath>
#include <optional>

#include "spi/solvers.hpp"

namespace spi::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Applies StopCriteria to the residual norm a solver reports after each
/// iteration (||b - Ax||, or the normal-equation residual for CG).
class StopMonitor {
 public:
  StopMonitor(const StopCriteria& stop, std::size_t n, double initial_residual)
      : threshold_(stop.residual_change_threshold),
        max_(stop.max_iterations(n)),
        min_(std::min(stop.min_iterations, max_)),
        previous_(initial_residual) {}

  std::optional<Termination> check(std::size_t k, double residual) {
    const double change = std::abs(residual - previous_);
    previous_ = residual;
    if (k >= min_ && change < threshold_) return Termination::residual_change;
    if (k >= max_) return Termination::max_iterations;
    return std::nullopt;
  }

  std::size_t max_iterations() const { return max_; }

 private:
  double threshold_;
  std::size_t max_;
  std::size_t min_;
  double previous_;
};

void check_problem(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape);

inline Image to_image(const Eigen::VectorXd& x, ImageShape shape) {
  return devectorize(x, shape.width, shape.height);
}

/// Shared shrink loop. phi(step) evaluates the objective at x + step p;
/// f0 = phi(0) and slope = pᵀp.
double backtrack(const std::function<double(double)>& phi, double f0, double slope,
                 const LineSearchParams& params);

}  // namespace spi::detail
