#include <Eigen/QR>

#include "solvers/internal.hpp"
#include "spi/errors.hpp"

namespace spi {

namespace {

constexpr double kMaxNormalCondition = 1e12;

SolverReport finish(const Eigen::VectorXd& x, ImageShape shape, const detail::Stopwatch& clock) {
  SolverReport report;
  report.image = detail::to_image(x, shape);
  report.iterations = 0;
  report.terminated_by = Termination::exact;
  report.wall_time = clock.seconds();
  return report;
}

}  // namespace

SolverReport pinv_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape) {
  detail::check_problem(patterns, meas, shape);
  detail::Stopwatch clock;
  if (patterns.m() < patterns.n()) {
    throw SingularSystem("AᵀA is rank deficient with " + std::to_string(patterns.m()) +
                         " measurements for " + std::to_string(patterns.n()) + " pixels");
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(patterns.rows);
  const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  const double largest = diag.maxCoeff();
  const double smallest = diag.minCoeff();
  // cond(AᵀA) = cond(A)^2; the pivoted R diagonal bounds cond(A) from below.
  if (smallest == 0.0 || (largest / smallest) * (largest / smallest) > kMaxNormalCondition) {
    throw SingularSystem("AᵀA is numerically singular (condition estimate above 1e12)");
  }
  return finish(qr.solve(meas.values), shape, clock);
}

SolverReport corr_reconstruct(const PatternSet& patterns, const MeasurementSet& meas,
                              ImageShape shape) {
  detail::check_problem(patterns, meas, shape);
  detail::Stopwatch clock;
  const double m = static_cast<double>(patterns.m());
  const Eigen::VectorXd weighted = patterns.rows.transpose() * meas.values / m;  // {b a}
  const Eigen::VectorXd mean_pattern =
      patterns.rows.transpose() * Eigen::VectorXd::Ones(patterns.rows.rows()) / m;  // {a}
  const Eigen::VectorXd x = weighted - meas.values.mean() * mean_pattern;
  return finish(x, shape, clock);
}

SolverReport dgi_reconstruct(const PatternSet& patterns, const MeasurementSet& meas,
                             ImageShape shape) {
  detail::check_problem(patterns, meas, shape);
  detail::Stopwatch clock;
  const double m = static_cast<double>(patterns.m());
  const double mean_s = patterns.intensities.mean();
  if (mean_s == 0.0) throw InvalidArgument("DGI needs patterns with nonzero total intensity");
  const Eigen::VectorXd weighted = patterns.rows.transpose() * meas.values / m;           // {b a}
  const Eigen::VectorXd s_weighted = patterns.rows.transpose() * patterns.intensities / m;  // {s a}
  const Eigen::VectorXd x = weighted - (meas.values.mean() / mean_s) * s_weighted;
  return finish(x, shape, clock);
}

}  // namespace spi
