#include <cmath>

#include "solvers/internal.hpp"
#include "spi/errors.hpp"

namespace spi {

namespace {

// The measurement residual is carried by recurrence and recomputed from
// scratch this often to bound drift.
constexpr std::size_t kResidualRefresh = 32;

}  // namespace

Eigen::VectorXd gd_gradient(const PatternSet& patterns, const Eigen::VectorXd& x,
                            const MeasurementSet& meas) {
  if (static_cast<std::size_t>(x.size()) != patterns.n() || meas.m() != patterns.m()) {
    throw InvalidArgument("gd_gradient: inconsistent dimensions");
  }
  return 2.0 * (patterns.rows.transpose() * (patterns.rows * x - meas.values));
}

std::optional<double> gd_optimal_step(const PatternSet& patterns, const Eigen::VectorXd& p,
                                      const Eigen::VectorXd& r) {
  const Eigen::VectorXd ap = patterns.rows * p;
  const double curvature = ap.squaredNorm();  // pᵀAᵀAp
  if (curvature == 0.0) return std::nullopt;
  return -ap.dot(r) / curvature;  // -(pᵀAᵀr) / (pᵀAᵀAp)
}

SolverReport gd_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                      const StopCriteria& stop) {
  detail::check_problem(patterns, meas, shape);
  stop.validate(patterns.n());
  detail::Stopwatch clock;
  const auto& a = patterns.rows;
  const Eigen::VectorXd& b = meas.values;

  SolverState s;
  s.x = Eigen::VectorXd::Zero(a.cols());
  s.r = b;
  double residual = s.r.norm();
  detail::StopMonitor monitor(stop, patterns.n(), residual);

  SolverReport report;
  report.trace.push_back({0, residual, residual * residual});
  report.terminated_by = Termination::max_iterations;

  for (s.k = 1;; ++s.k) {
    s.p = -2.0 * (a.transpose() * s.r);  // 2Aᵀ(Ax - b)
    const Eigen::VectorXd ap = a * s.p;
    const double curvature = ap.squaredNorm();
    if (curvature == 0.0) {
      --s.k;
      report.terminated_by = Termination::exact;
      break;
    }
    s.step = -ap.dot(s.r) / curvature;
    s.x -= s.step * s.p;
    if (s.k % kResidualRefresh == 0) {
      s.r = b - a * s.x;
    } else {
      s.r += s.step * ap;
    }
    residual = s.r.norm();
    const double objective = residual * residual;
    if (!std::isfinite(objective)) {
      throw NumericalFailure("gradient descent objective is not finite", s.k);
    }
    report.trace.push_back({s.k, residual, objective});
    if (auto why = monitor.check(s.k, residual)) {
      report.terminated_by = *why;
      break;
    }
  }
  report.iterations = s.k;
  report.image = detail::to_image(s.x, shape);
  report.wall_time = clock.seconds();
  return report;
}

// CGLS form of conjugate gradients on AᵀA x = Aᵀb. With normal residual
// g = Aᵀ(b - Ax) the search direction is d_k = g_k + (|g_k|^2 / |g_{k-1}|^2) d_{k-1},
// d_1 = g_0, and the step |g_{k-1}|^2 / (d_kᵀ AᵀA d_k). This is the usual
// sign-flipped statement of p = -d with update x' = x - step p.
SolverReport cgd_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                       const StopCriteria& stop, const CgdOptions& options) {
  detail::check_problem(patterns, meas, shape);
  stop.validate(patterns.n());
  detail::Stopwatch clock;
  const auto& a = patterns.rows;
  const Eigen::VectorXd& b = meas.values;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  if (options.initial) {
    if (options.initial->size() != a.cols()) {
      throw InvalidArgument("cgd_solve: initial guess has the wrong length");
    }
    x = *options.initial;
  }
  Eigen::VectorXd residual_vec = b - a * x;      // b - Ax
  Eigen::VectorXd g = a.transpose() * residual_vec;  // b' - A'x
  const double rhs_norm = (a.transpose() * b).norm();
  const double exact_floor = options.exact_tolerance * rhs_norm;
  double gamma = g.squaredNorm();
  double residual = residual_vec.norm();

  // The trace and the stop rule follow the normal-equation residual b' - A'x;
  // the objective column keeps |b - Ax|^2.
  SolverReport report;
  report.trace.push_back({0, std::sqrt(gamma), residual * residual});
  report.terminated_by = Termination::max_iterations;
  detail::StopMonitor monitor(stop, patterns.n(), std::sqrt(gamma));

  std::size_t k = 0;
  if (std::sqrt(gamma) <= exact_floor) {
    report.terminated_by = Termination::exact;
  } else {
    Eigen::VectorXd d = g;
    for (k = 1;; ++k) {
      const Eigen::VectorXd t = a * d;
      const double curvature = t.squaredNorm();
      if (curvature <= 1e-300) {
        throw NumericalFailure("conjugate gradient breakdown: dᵀAᵀAd is not positive", k);
      }
      const double step = gamma / curvature;
      x += step * d;
      if (k % kResidualRefresh == 0) {
        residual_vec = b - a * x;
      } else {
        residual_vec -= step * t;
      }
      g = a.transpose() * residual_vec;
      const double gamma_next = g.squaredNorm();
      residual = residual_vec.norm();
      if (!std::isfinite(residual)) throw NumericalFailure("conjugate gradient diverged", k);
      report.trace.push_back({k, std::sqrt(gamma_next), residual * residual});
      if (std::sqrt(gamma_next) <= exact_floor) {
        report.terminated_by = Termination::exact;
        break;
      }
      if (auto why = monitor.check(k, std::sqrt(gamma_next))) {
        report.terminated_by = *why;
        break;
      }
      d = g + (gamma_next / gamma) * d;
      gamma = gamma_next;
    }
  }
  report.iterations = k;
  report.image = detail::to_image(x, shape);
  report.wall_time = clock.seconds();
  return report;
}

}  // namespace spi
