#pragma once

#include <vector>

#include "lgl/solver_config.hpp"

namespace lgl {

/// Exponent pieces of the single-neuron solution, for x <= 0. An infinite tau selects
/// the counting-synapse limits.
double h_self(double tau, double base, double x);     ///< b(tau(e^{x/tau} - 1) - x)
double h_pair(double tau, double weight, double x);   ///< tau e^{-tau mu}(Ei(tau mu e^{x/tau}) - Ei(tau mu)) - x
double l_reset(double tau, double reset, double x);   ///< tau r (e^{x/tau} - 1)

struct Input {
  double rate;
  double weight;
};

/// One neuron driven by independent Poisson spike trains. Its inter-spike interval S has
/// survival P(S > t) = exp(log_survival(-t)), so the output rate is 1 / int_{-inf}^0
/// exp(log_survival(v)) dv. log_survival is concave on v <= 0 (hazard(v) grows as v
/// decreases), which gives the certified tail bound used to truncate the integrals.
class RenewalNeuron {
 public:
  RenewalNeuron(double tau, double base, double reset, std::vector<Input> inputs);

  /// h_i(u) + sum_j beta_j h_ij(u).
  [[nodiscard]] double cumulative_drive(double u) const;
  [[nodiscard]] double log_survival(double v) const;
  /// d/dv log_survival(v); equals the hazard of S at t = -v.
  [[nodiscard]] double hazard(double v) const;

  /// int_{-inf}^0 exp(log_survival(v)) dv, the mean inter-spike interval.
  [[nodiscard]] double mean_interval(const SolverConfig& cfg) const;

  /// The moment generating function of the stationary intensity, given the output rate, for
  /// -tau < u <= 0: beta int_{-inf}^x exp(cumulative_drive(x) - cumulative_drive(v) + l(v)) dv
  /// with u = tau (e^{x/tau} - 1) (x = u for infinite tau).
  [[nodiscard]] double mgf(double beta, double u, const SolverConfig& cfg) const;

  /// Lower limit beyond which the remaining mass of exp(log_survival - log_survival(upper))
  /// is below tail_tol times the mass on [limit, upper].
  [[nodiscard]] double truncation_point(double upper, double tail_tol) const;

  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] double base() const { return base_; }
  [[nodiscard]] double reset() const { return reset_; }
  /// Active inputs, merged by weight.
  [[nodiscard]] const std::vector<Input>& inputs() const { return inputs_; }

 private:
  // int_{-inf}^upper exp(log_survival(v) - log_survival(upper)) dv
  [[nodiscard]] double normalised_integral(double upper, const SolverConfig& cfg) const;

  double tau_;
  double base_;
  double reset_;
  std::vector<Input> inputs_;
};

}  // namespace lgl
