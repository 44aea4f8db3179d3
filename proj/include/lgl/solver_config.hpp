#pragma once

#include <optional>
#include <vector>

#include "lgl/model.hpp"

namespace lgl {

struct SolverConfig {
  double quad_rel_tol = 1e-10;
  double quad_abs_tol = 1e-12;
  double tail_tol = 1e-14;  ///< relative mass allowed beyond the truncated lower limit
  double fp_tol = 1e-10;    ///< relative sup-norm change that ends the iteration
  int max_iter = 20;
  double damping = 1.0;  ///< beta <- (1 - damping) beta + damping rhs(beta)
  bool ode_diagnostic = false;  ///< fill SolveReport::residual_ode (RMF only)
};

/// Throws InvalidArgument unless every tolerance is positive, max_iter >= 1 and
/// damping lies in (0, 1].
void require_valid(const SolverConfig& cfg);

struct SolveReport {
  RateVector beta;
  int iterations = 0;
  double final_residual = 0.0;  ///< max relative change over the last iteration
  bool converged = false;
  std::vector<double> change;  ///< per-neuron relative change over the last iteration
  std::optional<std::vector<double>> residual_ode;
};

}  // namespace lgl
