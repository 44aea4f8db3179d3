#include "lgl/tmf_solver.hpp"

#include <algorithm>
#include <cmath>

#include "lgl/error.hpp"
#include "lgl/rmf_solver.hpp"
#include "lgl/specfun.hpp"

namespace lgl {
namespace {

std::vector<double> drive(const NetworkSpec& spec, const RateVector& beta) {
  if (beta.size() != spec.K) throw InvalidArgument("rate vector length differs from K");
  std::vector<double> alpha(spec.K, 0.0);
  for (const Synapse& s : spec.synapses) alpha[s.post] += s.weight * beta[s.pre];
  return alpha;
}

double finite_rate(double tau, double s, double r) {
  return s / std::exp(specfun::log_confluent_series(tau * s, tau * (s - r)));
}

double counting_rate_tmf(double r, double alpha) {
  if (alpha == 0.0) return r;
  // int_0^inf exp(-r t - alpha t^2/2) dt = e^y (2 alpha)^{-1/2} Gamma(1/2, y), y = r^2/(2 alpha)
  const double y = r * r / (2.0 * alpha);
  const double log_integral =
      y - 0.5 * std::log(2.0 * alpha) + specfun::log_upper_gamma(0.5, y).log_magnitude;
  return std::exp(-log_integral);
}

struct Neuron {
  double tau, r, s, beta;
};

Neuron finite_neuron(const NetworkSpec& spec, const RateVector& beta, std::size_t i) {
  require_valid(spec);
  if (i >= spec.K) throw InvalidArgument("neuron index out of range");
  if (is_counting(spec.tau[i])) {
    throw InvalidArgument("closed-form density needs a finite relaxation time");
  }
  const TmfState st = tmf_state(spec, beta);
  return {spec.tau[i], spec.r[i], st.s[i], beta[i]};
}

}  // namespace

TmfState tmf_state(const NetworkSpec& spec, const RateVector& beta) {
  const std::vector<double> alpha = drive(spec, beta);
  TmfState st{std::vector<double>(spec.K), beta};
  for (std::size_t i = 0; i < spec.K; ++i) {
    if (is_counting(spec.tau[i])) {
      st.s[i] = alpha[i] > 0.0 ? kInfiniteTau : spec.b[i];
    } else {
      st.s[i] = spec.b[i] + spec.tau[i] * alpha[i];
    }
  }
  return st;
}

RateVector tmf_rhs(const NetworkSpec& spec, const RateVector& beta,
                   [[maybe_unused]] const SolverConfig& cfg) {
  require_valid(spec);
  const std::vector<double> alpha = drive(spec, beta);
  std::vector<double> out(spec.K);
  for (std::size_t i = 0; i < spec.K; ++i) {
    const double tau = spec.tau[i];
    out[i] = is_counting(tau) ? counting_rate_tmf(spec.r[i], alpha[i])
                              : finite_rate(tau, spec.b[i] + tau * alpha[i], spec.r[i]);
  }
  return RateVector(std::move(out));
}

SolveReport solve_tmf(const NetworkSpec& spec, const SolverConfig& cfg,
                      const std::optional<RateVector>& beta0) {
  require_valid(spec);
  require_valid(cfg);
  RateVector start = beta0.value_or(RateVector(spec.b));
  if (start.size() != spec.K) throw InvalidArgument("initial rate vector length differs from K");
  return iterate_fixed_point([&](const RateVector& beta) { return tmf_rhs(spec, beta, cfg); },
                             std::move(start), cfg);
}

double tmf_density(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double lambda) {
  const auto [tau, r, s, b] = finite_neuron(spec, beta, i);
  if (!(s > r)) throw DegenerateDistribution("intensity is the point mass at r");
  if (!(lambda >= r && lambda < s)) return 0.0;
  const double gap = s - lambda;
  const double log_p = tau * (lambda - r) - std::log(gap) +
                       tau * s * (std::log(gap) - std::log(s - r)) + std::log(b * tau);
  return std::exp(log_p);
}

double tmf_mgf(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u) {
  const auto [tau, r, s, b] = finite_neuron(spec, beta, i);
  if (!(u > -tau)) throw InvalidArgument("tmf_mgf needs u > -tau");
  // beta tau e^{su + (s-r)tau} gamma(tau s, y) / y^{tau s} with y = (s-r)(tau+u), rewritten
  // through the confluent series.
  return b / s * std::exp(r * u + specfun::log_confluent_series(tau * s, (s - r) * (tau + u)));
}

double tmf_ode_residual(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u) {
  const auto [tau, r, s, b] = finite_neuron(spec, beta, i);
  if (!(u > -tau)) throw InvalidArgument("tmf_ode_residual needs u > -tau");
  const double h = std::min(1e-3, (u + tau) / 4.0);
  auto L = [&](double x) { return tmf_mgf(spec, beta, i, x); };
  const double slope =
      (L(u - 2 * h) - 8.0 * L(u - h) + 8.0 * L(u + h) - L(u + 2 * h)) / (12.0 * h);
  const double t1 = -(1.0 + u / tau) * slope;
  const double t2 = u * s / tau * L(u);
  const double t3 = b * std::exp(u * r);
  const double scale = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
  return std::fabs(t1 + t2 + t3) / scale;
}

}  // namespace lgl
