#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lgl/model.hpp"
#include "lgl/solver_config.hpp"

namespace lgl {

/// Deterministic-drive description of each neuron. s_i = b_i + tau_i sum_j mu_ij beta_j is
/// the level the intensity relaxes toward between spikes; it is infinite for tau_i infinite
/// with any active input.
struct TmfState {
  std::vector<double> s;
  RateVector beta;
};

TmfState tmf_state(const NetworkSpec& spec, const RateVector& beta);

/// Output rates when neuron i sees its inputs as the constant drive sum_j mu_ij beta_j.
///
/// Finite tau: beta_i = s_i / S(tau_i s_i, tau_i (s_i - r_i)) with S the confluent series
/// of specfun, which also covers s_i = r_i (S = 1). Infinite tau: the intensity grows
/// linearly as r_i + alpha_i t with alpha_i = sum_j mu_ij beta_j, so
/// 1/beta_i = int_0^inf exp(-r_i t - alpha_i t^2 / 2) dt, an a = 1/2 upper incomplete gamma.
RateVector tmf_rhs(const NetworkSpec& spec, const RateVector& beta, const SolverConfig& cfg);

SolveReport solve_tmf(const NetworkSpec& spec, const SolverConfig& cfg,
                      const std::optional<RateVector>& beta0 = std::nullopt);

/// Stationary density of lambda_i, supported on [r_i, s_i]. Requires finite tau_i and
/// s_i > r_i; throws DegenerateDistribution when s_i = r_i.
double tmf_density(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double lambda);

/// Moment generating function of the stationary intensity, u > -tau_i, finite tau_i.
double tmf_mgf(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u);

/// Relative residual of -(1 + u/tau) L' + (u s / tau) L + beta e^{u r} at u, with L' from a
/// five-point central difference of tmf_mgf.
double tmf_ode_residual(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u);

}  // namespace lgl
