#include "lgl/rmf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/tools/roots.hpp>

#include "lgl/error.hpp"
#include "lgl/specfun.hpp"

namespace lgl {

void require_valid(const SolverConfig& cfg) {
  if (!(cfg.quad_rel_tol > 0.0) || !(cfg.quad_abs_tol > 0.0) || !(cfg.tail_tol > 0.0) ||
      !(cfg.fp_tol > 0.0)) {
    throw InvalidArgument("solver tolerances must be positive");
  }
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) {
    throw InvalidArgument("damping must lie in (0, 1]");
  }
}

namespace {

void require_counting_args(std::size_t K, double b, double mu) {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("b must be positive");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be nonnegative");
}

double log_counting_balance(double c, double x) {
  const double a = x + c;
  return std::log(c) - std::log(a) + specfun::log_confluent_series(a, c);
}

struct CountingParams {
  double beta;
  double a;
  double c;
};

CountingParams counting_params(std::size_t K, double b, double mu) {
  const double beta = counting_rate(K, b, mu);
  const double c = static_cast<double>(K - 1) * beta / mu;
  return {beta, c + b / mu, c};
}

}  // namespace

double counting_balance(double c, double x) {
  if (!(c >= 0.0) || !(x >= 0.0)) throw InvalidArgument("counting_balance needs c, x >= 0");
  if (c == 0.0) return 0.0;
  return std::exp(log_counting_balance(c, x));
}

double counting_rate(std::size_t K, double b, double mu) {
  require_counting_args(K, b, mu);
  if (mu == 0.0 || K == 1) return b;
  const double x = b / mu;
  const double target = std::log(static_cast<double>(K - 1));
  auto g = [&](double c) { return log_counting_balance(c, x) - target; };

  double hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  double lo = hi / 2.0;
  while (g(lo) > 0.0) lo /= 2.0;

  std::uintmax_t max_iter = 200;
  const auto [left, right] = boost::math::tools::toms748_solve(
      g, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double c = 0.5 * (left + right);
  return mu * c / static_cast<double>(K - 1);
}

CountingDistribution counting_distribution(std::size_t K, double b, double mu, std::size_t n_max) {
  require_counting_args(K, b, mu);
  CountingDistribution out;
  out.p.resize(n_max + 1, 0.0);
  if (K == 1) {
    out.p[0] = 1.0;
    return out;
  }
  if (mu == 0.0) {
    // Poisson arrivals at rate K-1 during an exponential(b) interval: geometric.
    const double others = static_cast<double>(K - 1);
    const double q = others / (b + others);
    double log_p = std::log(b / (b + others));
    for (std::size_t n = 0; n <= n_max; ++n) {
      out.p[n] = std::exp(log_p);
      log_p += std::log(q);
    }
    out.tail_mass = out.p[n_max] * q / (1.0 - q);
    return out;
  }
  const auto [beta, a, c] = counting_params(K, b, mu);
  const double log_c = std::log(c);
  double log_p = std::log(beta / (mu * a));
  out.p[0] = std::exp(log_p);
  for (std::size_t n = 1; n <= n_max; ++n) {
    log_p += log_c - std::log(a + static_cast<double>(n));
    out.p[n] = std::exp(log_p);
  }
  // Successive ratios c/(a+n+1) decrease, so the tail is dominated by a geometric series.
  const double rho = c / (a + static_cast<double>(n_max) + 1.0);
  out.tail_mass = out.p[n_max] * rho / (1.0 - rho);
  return out;
}

std::size_t counting_support(std::size_t K, double b, double mu, double tail) {
  require_counting_args(K, b, mu);
  if (!(tail > 0.0)) throw InvalidArgument("tail must be positive");
  if (K == 1) return 0;
  double log_p, log_tail_factor;
  std::size_t n = 0;
  if (mu == 0.0) {
    const double others = static_cast<double>(K - 1);
    const double q = others / (b + others);
    log_p = std::log(b / (b + others));
    while (true) {
      log_tail_factor = std::log(q / (1.0 - q));
      if (log_p + log_tail_factor < std::log(tail)) return n;
      log_p += std::log(q);
      ++n;
    }
  }
  const auto [beta, a, c] = counting_params(K, b, mu);
  log_p = std::log(beta / (mu * a));
  while (true) {
    const double rho = c / (a + static_cast<double>(n) + 1.0);
    if (log_p + std::log(rho / (1.0 - rho)) < std::log(tail)) return n;
    ++n;
    log_p += std::log(c) - std::log(a + static_cast<double>(n));
  }
}

double counting_pgf(std::size_t K, double b, double mu, double z) {
  require_counting_args(K, b, mu);
  if (!(z >= 0.0 && z <= 1.0)) throw InvalidArgument("PGF argument must lie in [0, 1]");
  if (K == 1 || z == 1.0) return 1.0;
  if (mu == 0.0) return b / (b + static_cast<double>(K - 1) * (1.0 - z));
  const auto [beta, a, c] = counting_params(K, b, mu);
  // G(z) = e^{c(z-1)} z^{-a} gamma(a, zc) / gamma(a, c); the z^{-a} singularity cancels in
  // the normalised series, which also gives G(0) = p(0) directly.
  return std::exp(specfun::log_confluent_series(a, z * c) - specfun::log_confluent_series(a, c));
}

RenewalNeuron rmf_neuron(const NetworkSpec& spec, std::span<const double> beta, std::size_t i) {
  std::vector<Input> inputs;
  for (const Synapse& s : spec.synapses) {
    if (s.post == i) inputs.push_back({beta[s.pre], s.weight});
  }
  return RenewalNeuron(spec.tau[i], spec.b[i], spec.r[i], std::move(inputs));
}

namespace {

std::vector<RenewalNeuron> build_neurons(const NetworkSpec& spec,
                                         const std::vector<std::vector<Afferent>>& in,
                                         const RateVector& beta) {
  std::vector<RenewalNeuron> out;
  out.reserve(spec.K);
  for (std::size_t i = 0; i < spec.K; ++i) {
    std::vector<Input> inputs;
    inputs.reserve(in[i].size());
    for (const Afferent& a : in[i]) inputs.push_back({beta[a.source], a.weight});
    out.emplace_back(spec.tau[i], spec.b[i], spec.r[i], std::move(inputs));
  }
  return out;
}

RateVector rhs_with(const NetworkSpec& spec, const std::vector<std::vector<Afferent>>& in,
                    const RateVector& beta, const SolverConfig& cfg) {
  if (beta.size() != spec.K) throw InvalidArgument("rate vector length differs from K");
  std::vector<double> out(spec.K);
  const auto neurons = build_neurons(spec, in, beta);
  for (std::size_t i = 0; i < spec.K; ++i) out[i] = 1.0 / neurons[i].mean_interval(cfg);
  return RateVector(std::move(out));
}

}  // namespace

RateVector rmf_rhs(const NetworkSpec& spec, const RateVector& beta, const SolverConfig& cfg) {
  require_valid(spec);
  return rhs_with(spec, incoming(spec), beta, cfg);
}

SolveReport iterate_fixed_point(const std::function<RateVector(const RateVector&)>& rhs,
                                RateVector beta0, const SolverConfig& cfg) {
  require_valid(cfg);
  SolveReport report;
  RateVector beta = std::move(beta0);
  const std::size_t K = beta.size();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const RateVector image = rhs(beta);
    std::vector<double> next(K);
    report.change.assign(K, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      next[i] = (1.0 - cfg.damping) * beta[i] + cfg.damping * image[i];
      report.change[i] = std::fabs(next[i] - beta[i]) / next[i];
      worst = std::max(worst, report.change[i]);
    }
    beta = RateVector(std::move(next));
    report.iterations = it;
    report.final_residual = worst;
    if (worst < cfg.fp_tol) {
      report.converged = true;
      break;
    }
  }
  report.beta = std::move(beta);
  return report;
}

SolveReport solve_rmf(const NetworkSpec& spec, const SolverConfig& cfg,
                      const std::optional<RateVector>& beta0) {
  require_valid(spec);
  require_valid(cfg);
  const auto in = incoming(spec);
  RateVector start = beta0.value_or(RateVector(spec.b));
  if (start.size() != spec.K) throw InvalidArgument("initial rate vector length differs from K");
  SolveReport report = iterate_fixed_point(
      [&](const RateVector& beta) { return rhs_with(spec, in, beta, cfg); }, std::move(start), cfg);
  if (cfg.ode_diagnostic) {
    SolverConfig fine = cfg;
    fine.quad_rel_tol = std::min(cfg.quad_rel_tol, 1e-13);
    fine.quad_abs_tol = std::min(cfg.quad_abs_tol, 1e-15);
    std::vector<double> worst(spec.K, 0.0);
    for (std::size_t i = 0; i < spec.K; ++i) {
      for (double u : {-0.5, -0.1, -0.01}) {
        worst[i] = std::max(worst[i], rmf_ode_residual(spec, report.beta, i, u, fine));
      }
    }
    report.residual_ode = std::move(worst);
  }
  return report;
}

double rmf_mgf(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u,
               const SolverConfig& cfg) {
  require_valid(spec);
  if (beta.size() != spec.K) throw InvalidArgument("rate vector length differs from K");
  if (i >= spec.K) throw InvalidArgument("neuron index out of range");
  if (u > 0.0) throw InvalidArgument("rmf_mgf is supported for u <= 0 only");
  const RenewalNeuron neuron = rmf_neuron(spec, beta.values(), i);
  const double image = 1.0 / neuron.mean_interval(cfg);
  const double tol = std::max(10.0 * cfg.fp_tol, 100.0 * cfg.quad_rel_tol);
  if (std::fabs(image - beta[i]) > tol * beta[i]) {
    throw InvalidArgument("rate vector is not a fixed point for neuron " + std::to_string(i));
  }
  return neuron.mgf(beta[i], u, cfg);
}

double rmf_ode_residual(const NetworkSpec& spec, const RateVector& beta, std::size_t i, double u,
                        const SolverConfig& cfg) {
  if (!(u < 0.0)) throw InvalidArgument("ODE residual is evaluated at u < 0");
  const double h = std::min(1e-3, -u / 4.0);
  auto L = [&](double x) { return rmf_mgf(spec, beta, i, x, cfg); };
  const double value = L(u);
  const double slope =
      (L(u - 2 * h) - 8.0 * L(u - h) + 8.0 * L(u + h) - L(u + 2 * h)) / (12.0 * h);

  const double tau = spec.tau[i];
  const double relax = is_counting(tau) ? 0.0 : u / tau;
  double coupling = relax * spec.b[i];
  for (const Synapse& s : spec.synapses) {
    if (s.post == i) coupling += std::expm1(u * s.weight) * beta[s.pre];
  }
  const double t1 = -(1.0 + relax) * slope;
  const double t2 = coupling * value;
  const double t3 = beta[i] * std::exp(u * spec.r[i]);
  const double scale = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
  return std::fabs(t1 + t2 + t3) / scale;
}

void write_csv(std::ostream& out, const SolveReport& report) {
  const auto old = out.precision(12);
  out << "neuron,beta,iterations,converged,residual\n";
  for (std::size_t i = 0; i < report.beta.size(); ++i) {
    const double change = i < report.change.size() ? report.change[i] : 0.0;
    out << i << ',' << report.beta[i] << ',' << report.iterations << ','
        << (report.converged ? "true" : "false") << ',' << change << '\n';
  }
  out.precision(old);
}

}  // namespace lgl
