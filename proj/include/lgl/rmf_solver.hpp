#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lgl/model.hpp"
#include "lgl/renewal.hpp"
#include "lgl/solver_config.hpp"

namespace lgl {

// ---------------------------------------------------------------------------
// Homogeneous counting model: K fully connected neurons, tau infinite, b = r,
// common weight mu. Everything below is closed form up to one scalar root.
// ---------------------------------------------------------------------------

/// f(c) = c^{1-(x+c)} e^{c} gamma(x+c, c) = sum_n c^{n+1} / ((x+c)...(x+c+n)).
/// Strictly increasing from f(0) = 0; the counting rate solves f(c) = K - 1 with x = b/mu.
double counting_balance(double c, double x);

/// Unique stationary rate of the homogeneous counting model. Returns b when mu = 0 or K = 1.
double counting_rate(std::size_t K, double b, double mu);

struct CountingDistribution {
  std::vector<double> p;    ///< p(0) ... p(n_max)
  double tail_mass = 0.0;   ///< upper bound on sum_{n > n_max} p(n)
};

/// Stationary law of the number of spikes received since the last reset.
CountingDistribution counting_distribution(std::size_t K, double b, double mu, std::size_t n_max);

/// Smallest n_max whose reported tail bound is below `tail`.
std::size_t counting_support(std::size_t K, double b, double mu, double tail);

/// Probability generating function of the received count, z in [0, 1].
double counting_pgf(std::size_t K, double b, double mu, double z);

// ---------------------------------------------------------------------------
// General heterogeneous networks.
// ---------------------------------------------------------------------------

/// The single-neuron problem seen by neuron i when every partner j fires as an
/// independent Poisson process of rate beta_j.
RenewalNeuron rmf_neuron(const NetworkSpec& spec, std::span<const double> beta, std::size_t i);

/// Component i is the output rate of neuron i given input rates beta.
RateVector rmf_rhs(const NetworkSpec& spec, const RateVector& beta, const SolverConfig& cfg);

/// Fixed-point iteration of rmf_rhs from beta0 (default: the base rates).
SolveReport solve_rmf(const NetworkSpec& spec, const SolverConfig& cfg,
                      const std::optional<RateVector>& beta0 = std::nullopt);

/// Moment generating function L_i(u) of neuron i's stationary intensity, -tau_i < u <= 0. Throws
/// InvalidArgument when beta is not a fixed point for component i.
double rmf_mgf(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u,
               const SolverConfig& cfg);

/// Residual of the first-order ODE satisfied by L_i at u < 0, relative to the largest of
/// its three terms. L_i' is taken by a five-point central difference of rmf_mgf.
double rmf_ode_residual(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u,
                        const SolverConfig& cfg);

/// Plain or damped iteration beta <- (1 - d) beta + d rhs(beta), shared by both solvers.
SolveReport iterate_fixed_point(const std::function<RateVector(const RateVector&)>& rhs,
                                RateVector beta0, const SolverConfig& cfg);

/// CSV with header `neuron,beta,iterations,converged,residual`.
void write_csv(std::ostream& out, const SolveReport& report);

}  // namespace lgl
