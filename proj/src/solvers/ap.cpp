#include <cmath>

#include "solvers/internal.hpp"
#include "spi/errors.hpp"

namespace spi {

namespace {

double clamp_denominator(double v) {
  if (std::abs(v) >= kDivisionFloor) return v;
  return v < 0.0 ? -kDivisionFloor : kDivisionFloor;
}

// x -= a ⊙ (a ⊙ x) / max(a)^2 * (a x - b) / (a x). Returns false for an
// all-zero pattern, which leaves x untouched.
bool project_in_place(const double* a, double peak, double measurement, Eigen::VectorXd& x) {
  if (!(peak > 0.0)) return false;
  const Eigen::Index n = x.size();
  double ax = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) ax += a[j] * x[j];
  if (ax == measurement) return true;
  const double factor = (ax - measurement) / clamp_denominator(ax) / (peak * peak);
  for (Eigen::Index j = 0; j < n; ++j) x[j] -= factor * a[j] * a[j] * x[j];
  return true;
}

}  // namespace

Eigen::VectorXd ap_update(const Eigen::VectorXd& pattern, double measurement,
                          const Eigen::VectorXd& x) {
  if (pattern.size() != x.size()) throw InvalidArgument("ap_update: length mismatch");
  Eigen::VectorXd out = x;
  project_in_place(pattern.data(), pattern.size() ? pattern.maxCoeff() : 0.0, measurement, out);
  return out;
}

SolverReport ap_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                      const StopCriteria& stop) {
  detail::check_problem(patterns, meas, shape);
  stop.validate(patterns.n());
  detail::Stopwatch clock;
  const auto& a = patterns.rows;
  const Eigen::VectorXd& b = meas.values;
  const Eigen::VectorXd peaks = a.rowwise().maxCoeff();

  SolverReport report;
  for (Eigen::Index i = 0; i < peaks.size(); ++i) {
    if (!(peaks[i] > 0.0)) ++report.warnings;  // skipped every sweep
  }

  Eigen::VectorXd x = Eigen::VectorXd::Constant(a.cols(), kPositiveStart);
  double residual = (b - a * x).norm();
  report.trace.push_back({0, residual, residual * residual});
  report.terminated_by = Termination::max_iterations;
  detail::StopMonitor monitor(stop, patterns.n(), residual);

  std::size_t k = 1;
  for (;; ++k) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      project_in_place(a.row(i).data(), peaks[i], b[i], x);
    }
    residual = (b - a * x).norm();
    if (!std::isfinite(residual)) throw NumericalFailure("alternating projection diverged", k);
    report.trace.push_back({k, residual, residual * residual});
    if (auto why = monitor.check(k, residual)) {
      report.terminated_by = *why;
      break;
    }
  }
  report.iterations = k;
  report.image = detail::to_image(x, shape);
  report.wall_time = clock.seconds();
  return report;
}

}  // namespace spi
