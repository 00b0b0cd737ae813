#include <string>

#include "spi/errors.hpp"
#include "spi/solvers.hpp"

namespace spi {

const std::vector<SolverEntry>& solver_registry() {
  static const std::vector<SolverEntry> registry = {
      {"pinv", "least squares via pivoted QR", false,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions&) {
         return pinv_solve(p, b, s);
       }},
      {"corr", "conventional correlation", false,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions&) {
         return corr_reconstruct(p, b, s);
       }},
      {"dgi", "differential ghost imaging", false,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions&) {
         return dgi_reconstruct(p, b, s);
       }},
      {"gd", "gradient descent with exact line search", true,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions& o) {
         return gd_solve(p, b, s, o.stop);
       }},
      {"cgd", "conjugate gradients on the normal equations", true,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions& o) {
         return cgd_solve(p, b, s, o.stop);
       }},
      {"poisson", "Poisson maximum likelihood with backtracking", true,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions& o) {
         return poisson_solve(p, b, s, o.stop, o.line_search);
       }},
      {"ap", "alternating projection", true,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions& o) {
         return ap_solve(p, b, s, o.stop);
       }},
      {"cs-dct", "ALM l1 minimization in the DCT basis", true,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions& o) {
         return alm_solve(p, b, s, dct_operator(s.width, s.height), o.alm, o.stop);
       }},
      {"cs-tv", "ALM anisotropic total variation", true,
       [](const PatternSet& p, const MeasurementSet& b, ImageShape s, const SolverOptions& o) {
         return alm_solve(p, b, s, gradient_operator(s.width, s.height), o.alm, o.stop);
       }},
  };
  return registry;
}

const SolverEntry& find_solver(std::string_view name) {
  for (const auto& entry : solver_registry()) {
    if (entry.name == name) return entry;
  }
  throw UnknownSolver("unknown solver '" + std::string(name) + "'; valid solvers: " +
                      solver_names());
}

std::string solver_names(std::string_view separator) {
  std::string out;
  for (const auto& entry : solver_registry()) {
    if (!out.empty()) out += separator;
    out += entry.name;
  }
  return out;
}

}  // namespace spi
