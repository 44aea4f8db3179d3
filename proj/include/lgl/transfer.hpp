#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lgl/renewal.hpp"
#include "lgl/solver_config.hpp"

namespace lgl {

/// A single neuron and the Poisson inputs (rate beta_j, weight mu_j) it receives.
struct TransferQuery {
  double tau = 1.0;
  double b = 1.0;
  double r = 1.0;
  std::vector<Input> inputs;
};

/// Stationary output rate of the neuron. Shares the integrand of rmf_rhs.
double transfer_eval(const TransferQuery& q, const SolverConfig& cfg);

/// Large-rate asymptote sqrt(2/pi sum_j mu_j beta_j).
double sqrt_asymptote(const TransferQuery& q);

struct SaturationBound {
  double beta_bar = 0.0;
  /// beta_bar (1 - sum_j beta_j / mu_j); empty when some active input has mu_j = 0.
  std::optional<double> corrected;
};

/// Limit of the transfer function as every weight grows without bound, and its first-order
/// correction. Equals b + sum_j beta_j when b = r (in particular for infinite tau).
SaturationBound saturation_bound(const TransferQuery& q);

enum class SweepKind { Rate, Weight };

struct TransferRow {
  double sweep_value;
  double F;
  std::optional<double> asymptote;
  double beta_bar;
  std::optional<double> corrected;
};

/// Sets every input's rate (or weight) to each value in turn and evaluates the transfer
/// function together with both asymptotes.
std::vector<TransferRow> transfer_sweep(const TransferQuery& q, SweepKind kind,
                                        std::span<const double> values, const SolverConfig& cfg);

/// CSV with header `sweep_value,F,sqrt_asymptote,beta_bar,corrected`; undefined entries
/// are left empty.
void write_csv(std::ostream& out, const std::vector<TransferRow>& rows);

}  // namespace lgl
