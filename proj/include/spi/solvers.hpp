#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "spi/image.hpp"
#include "spi/model.hpp"
#include "spi/transforms.hpp"

namespace spi {

/// Denominator floor for the Poisson gradient and the AP update.
inline constexpr double kDivisionFloor = 1e-12;

/// Starting value for the solvers whose objective needs Ax > 0.
inline constexpr double kPositiveStart = 1e-6;

struct StopCriteria {
  double residual_change_threshold = 1e-2;
  std::size_t min_iterations = 30;
  double max_iterations_factor = 3.0;

  /// floor(max_iterations_factor * n), at least 1.
  std::size_t max_iterations(std::size_t n) const;
  void validate(std::size_t n) const;
};

struct LineSearchParams {
  double alpha = 0.1;
  double beta = 0.5;

  void validate() const;
};

struct AlmParams {
  double mu1_init = 1.0;
  double mu2_init = 1.0;
  double rho = 1.05;
  double mu_max = 1e6;
  double inner_tolerance = 1e-8;
  std::size_t inner_max_iterations = 500;

  void validate() const;
};

enum class Termination { residual_change, max_iterations, exact };

std::string_view to_string(Termination t);

struct TraceEntry {
  std::size_t iteration = 0;
  double residual_norm = 0.0;
  double objective = 0.0;
  double prior_gap = 0.0;  // ||P x - c|| for the ALM solvers, else 0
};

struct SolverReport {
  Image image;
  std::size_t iterations = 0;
  double wall_time = 0.0;
  std::vector<TraceEntry> trace;
  Termination terminated_by = Termination::exact;
  // Clamped measurements, skipped patterns and similar recoverable events.
  std::size_t warnings = 0;
};

/// Iterate of a gradient-type solver. r is the measurement residual b - Ax.
struct SolverState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  double step = 0.0;
  Eigen::VectorXd r;
  std::size_t k = 0;
};

struct SolverOptions {
  StopCriteria stop;
  LineSearchParams line_search;
  AlmParams alm;
};

// Non-iterative methods.
SolverReport pinv_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape);
SolverReport corr_reconstruct(const PatternSet& patterns, const MeasurementSet& meas,
                              ImageShape shape);
SolverReport dgi_reconstruct(const PatternSet& patterns, const MeasurementSet& meas,
                             ImageShape shape);

// Gradient descent on ||Ax - b||^2.
Eigen::VectorXd gd_gradient(const PatternSet& patterns, const Eigen::VectorXd& x,
                            const MeasurementSet& meas);
/// Exact minimizer of the objective along -p. Empty when Ap == 0, in which
/// case the caller has converged.
std::optional<double> gd_optimal_step(const PatternSet& patterns, const Eigen::VectorXd& p,
                                      const Eigen::VectorXd& r);
SolverReport gd_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                      const StopCriteria& stop);

// Conjugate gradients on the normal equations AᵀA x = Aᵀb, applied matrix-free.
struct CgdOptions {
  /// Exact termination once ||Aᵀ(b - Ax)|| <= exact_tolerance * ||Aᵀb||.
  double exact_tolerance = 1e-12;
  std::optional<Eigen::VectorXd> initial;
};
SolverReport cgd_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                       const StopCriteria& stop, const CgdOptions& options = {});

// Poisson maximum likelihood.
double poisson_objective(const PatternSet& patterns, const Eigen::VectorXd& x,
                         const MeasurementSet& meas);
Eigen::VectorXd poisson_gradient(const PatternSet& patterns, const Eigen::VectorXd& x,
                                 const MeasurementSet& meas);
/// Armijo backtracking: the first step in {1, beta, beta^2, ...} with
/// L(x + step p) <= L(x) - alpha step pᵀp. The objective may return +inf
/// outside its domain.
double backtracking_search(const std::function<double(const Eigen::VectorXd&)>& objective,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                           const LineSearchParams& params);
SolverReport poisson_solve(const PatternSet& patterns, const MeasurementSet& meas,
                           ImageShape shape, const StopCriteria& stop,
                           const LineSearchParams& ls);

// Alternating projection.
Eigen::VectorXd ap_update(const Eigen::VectorXd& pattern, double measurement,
                          const Eigen::VectorXd& x);
SolverReport ap_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                      const StopCriteria& stop);

// Augmented Lagrangian l1 minimization of ||P x||_1 subject to Ax = b.
SolverReport alm_solve(const PatternSet& patterns, const MeasurementSet& meas, ImageShape shape,
                       const LinearOperator& prior, const AlmParams& params,
                       const StopCriteria& stop);

using SolveFn = std::function<SolverReport(const PatternSet&, const MeasurementSet&, ImageShape,
                                           const SolverOptions&)>;

struct SolverEntry {
  std::string name;
  std::string description;
  bool iterative = true;
  SolveFn solve;
};

/// pinv, corr, dgi, gd, cgd, poisson, ap, cs-dct, cs-tv in that order.
const std::vector<SolverEntry>& solver_registry();

/// Throws UnknownSolver listing the valid names.
const SolverEntry& find_solver(std::string_view name);

std::string solver_names(std::string_view separator = ", ");

}  // namespace spi
