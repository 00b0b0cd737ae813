#include <cmath>
#include <limits>

#include "solvers/internal.hpp"
#include "spi/errors.hpp"

namespace spi {

namespace {

constexpr int kMaxShrinks = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kResidualRefreshPoisson = 32;

double clamp_denominator(double v) {
  if (std::abs(v) >= kDivisionFloor) return v;
  return v < 0.0 ? -kDivisionFloor : kDivisionFloor;
}

// sum_i (Ax_i - b_i log Ax_i), +inf outside Ax > 0.
double objective_from_projection(const Eigen::VectorXd& ax, const Eigen::VectorXd& b) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    if (!(ax[i] > 0.0)) return kInf;
    total += ax[i] - (b[i] == 0.0 ? 0.0 : b[i] * std::log(ax[i]));
  }
  return total;
}

Eigen::VectorXd gradient_from_projection(const RowMatrix& a, const Eigen::VectorXd& ax,
                                         const Eigen::VectorXd& b) {
  Eigen::VectorXd ratio(ax.size());
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    ratio[i] = (ax[i] - b[i]) / clamp_denominator(ax[i]);
  }
  Eigen::VectorXd p = a.transpose() * ratio;
  if (!p.allFinite()) throw NumericalFailure("Poisson gradient is not finite", 0);
  return p;
}

}  // namespace

namespace detail {

double backtrack(const std::function<double(double)>& phi, double f0, double slope,
                 const LineSearchParams& params) {
  double step = 1.0;
  for (int shrinks = 0; shrinks <= kMaxShrinks; ++shrinks) {
    if (phi(step) <= f0 - params.alpha * step * slope) return step;
    step *= params.beta;
  }
  throw LineSearchFailure("backtracking line search found no acceptable step after " +
                          std::to_string(kMaxShrinks) + " shrinks");
}

}  // namespace detail

double poisson_objective(const PatternSet& patterns, const Eigen::VectorXd& x,
                         const MeasurementSet& meas) {
  if (static_cast<std::size_t>(x.size()) != patterns.n() || meas.m() != patterns.m()) {
    throw InvalidArgument("poisson_objective: inconsistent dimensions");
  }
  if ((meas.values.array() < 0.0).any()) {
    throw DomainError("poisson_objective: measurements must be >= 0");
  }
  const Eigen::VectorXd ax = patterns.rows * x;
  const double value = objective_from_projection(ax, meas.values);
  if (std::isinf(value)) throw DomainError("poisson_objective: requires a_i x > 0 for every i");
  return value;
}

Eigen::VectorXd poisson_gradient(const PatternSet& patterns, const Eigen::VectorXd& x,
                                 const MeasurementSet& meas) {
  if (static_cast<std::size_t>(x.size()) != patterns.n() || meas.m() != patterns.m()) {
    throw InvalidArgument("poisson_gradient: inconsistent dimensions");
  }
  return gradient_from_projection(patterns.rows, patterns.rows * x, meas.values);
}

double backtracking_search(const std::function<double(const Eigen::VectorXd&)>& objective,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                           const LineSearchParams& params) {
  params.validate();
  const double f0 = objective(x);
  if (!std::isfinite(f0)) throw LineSearchFailure("objective is not finite at the start point");
  // A step too small to move x cannot satisfy the condition for p != 0; such
  // trials are rejected so an ascent direction exhausts the shrink cap.
  const bool moving = (p.array() != 0.0).any();
  return detail::backtrack(
      [&](double step) {
        const Eigen::VectorXd trial = x + step * p;
        if (moving && trial == x) return kInf;
        return objective(trial);
      },
      f0, p.squaredNorm(), params);
}

SolverReport poisson_solve(const PatternSet& patterns, const MeasurementSet& meas,
                           ImageShape shape, const StopCriteria& stop,
                           const LineSearchParams& ls) {
  detail::check_problem(patterns, meas, shape);
  stop.validate(patterns.n());
  ls.validate();
  detail::Stopwatch clock;
  const auto& a = patterns.rows;

  SolverReport report;
  Eigen::VectorXd b = meas.values;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (b[i] < 0.0) {
      b[i] = 0.0;
      ++report.warnings;
    }
  }

  SolverState s;
  s.x = Eigen::VectorXd::Constant(a.cols(), kPositiveStart);
  Eigen::VectorXd ax = a * s.x;
  s.r = b - ax;
  double objective = objective_from_projection(ax, b);
  if (!std::isfinite(objective)) {
    throw NumericalFailure("Poisson objective undefined at the start point", 0);
  }
  double residual = s.r.norm();
  report.trace.push_back({0, residual, objective});
  report.terminated_by = Termination::max_iterations;
  detail::StopMonitor monitor(stop, patterns.n(), residual);

  for (s.k = 1;; ++s.k) {
    s.p = -gradient_from_projection(a, ax, b);  // descent direction
    const Eigen::VectorXd ap = a * s.p;
    Eigen::VectorXd trial(ax.size());
    auto phi = [&](double step) {
      trial = ax + step * ap;
      return objective_from_projection(trial, b);
    };
    try {
      s.step = detail::backtrack(phi, objective, s.p.squaredNorm(), ls);
    } catch (const LineSearchFailure& e) {
      throw NumericalFailure(e.what(), s.k);
    }
    s.x += s.step * s.p;
    ax = s.k % kResidualRefreshPoisson == 0 ? Eigen::VectorXd(a * s.x)
                                            : Eigen::VectorXd(ax + s.step * ap);
    objective = objective_from_projection(ax, b);
    if (!std::isfinite(objective)) {
      throw NumericalFailure("Poisson objective is not finite", s.k);
    }
    s.r = b - ax;
    residual = s.r.norm();
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

}  // namespace spi
