#include <algorithm>
#include <cmath>

#include "solvers/internal.hpp"
#include "spi/errors.hpp"

namespace spi {

namespace {

// Conjugate gradients on a symmetric positive-definite operator, warm
// started from x. Returns false when the iteration cap is hit.
template <typename Op>
bool conjugate_gradient(const Op& apply, const Eigen::VectorXd& rhs, Eigen::VectorXd& x,
                        double tolerance, std::size_t max_iterations) {
  const double target = tolerance * rhs.norm();
  if (target == 0.0) {
    x.setZero();
    return true;
  }
  Eigen::VectorXd r = rhs - apply(x);
  double gamma = r.squaredNorm();
  if (std::sqrt(gamma) <= target) return true;
  Eigen::VectorXd d = r;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd q = apply(d);
    const double curvature = d.dot(q);
    if (!(curvature > 0.0)) return false;
    const double step = gamma / curvature;
    x += step * d;
    r -= step * q;
    const double gamma_next = r.squaredNorm();
    if (std::sqrt(gamma_next) <= target) return true;
    d = r + (gamma_next / gamma) * d;
    gamma = gamma_next;
  }
  return false;
}

}  // namespace

SolverReport alm_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                       const LinearOperator& prior, const AlmParams& params,
                       const StopCriteria& stop) {
  detail::check_problem(patterns, meas, shape);
  stop.validate(patterns.n());
  params.validate();
  if (prior.in_dim() != patterns.n()) {
    throw InvalidArgument("ALM prior acts on " + std::to_string(prior.in_dim()) +
                          " values but the patterns have " + std::to_string(patterns.n()) +
                          " pixels");
  }
  detail::Stopwatch clock;
  const auto& a = patterns.rows;
  const Eigen::VectorXd& b = meas.values;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  Eigen::VectorXd y1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prior.out_dim()));
  Eigen::VectorXd y2 = Eigen::VectorXd::Zero(a.rows());
  double mu1 = params.mu1_init;
  double mu2 = params.mu2_init;

  SolverReport report;
  double residual = b.norm();
  report.trace.push_back({0, residual, 0.0, 0.0});
  report.terminated_by = Termination::max_iterations;
  detail::StopMonitor monitor(stop, patterns.n(), residual);

  Eigen::VectorXd px = prior.apply(x);
  std::size_t k = 1;
  for (;; ++k) {
    // Coefficients: shrink P x + y1 / mu1 by 1 / mu1.
    const Eigen::VectorXd c = soft_threshold(px + y1 / mu1, 1.0 / mu1);

    // Image: (mu1 PᵀP + mu2 AᵀA) x = mu1 Pᵀ(c - y1/mu1) + mu2 Aᵀ(b - y2/mu2).
    const Eigen::VectorXd rhs = prior.apply_transpose(mu1 * c - y1) +
                                a.transpose() * (mu2 * b - y2);
    auto normal_op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      return mu1 * prior.apply_transpose(prior.apply(v)) +
             mu2 * (a.transpose() * (a * v));
    };
    if (!conjugate_gradient(normal_op, rhs, x, params.inner_tolerance,
                            params.inner_max_iterations)) {
      throw NumericalFailure("ALM inner conjugate gradient did not converge in " +
                                 std::to_string(params.inner_max_iterations) +
                                 " iterations (mu1=" + std::to_string(mu1) +
                                 ", mu2=" + std::to_string(mu2) + ")",
                             k);
    }

    // Multipliers and penalty weights.
    px = prior.apply(x);
    const Eigen::VectorXd prior_gap = px - c;
    const Eigen::VectorXd data_gap = a * x - b;
    y1 += mu1 * prior_gap;
    y2 += mu2 * data_gap;
    mu1 = std::min(params.rho * mu1, params.mu_max);
    mu2 = std::min(params.rho * mu2, params.mu_max);

    residual = data_gap.norm();
    const double objective = px.lpNorm<1>();
    if (!std::isfinite(residual) || !std::isfinite(objective)) {
      throw NumericalFailure("ALM iterate is not finite", k);
    }
    report.trace.push_back({k, residual, objective, prior_gap.norm()});
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
