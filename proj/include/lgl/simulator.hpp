#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lgl/model.hpp"

namespace lgl {

struct SimConfig {
  std::uint64_t max_events = 10'000'000;  ///< spikes to generate, burn-in included
  double burn_in_fraction = 0.1;          ///< leading fraction of spikes discarded
  std::uint64_t seed = 1;
  bool record_trace = false;  ///< keep every post-burn-in spike in SimResult::trace
  int batches = 20;           ///< batch count for the standard-error estimate
};

struct Spike {
  double time;
  std::size_t neuron;
};

/// Rates and spike statistics over the post-burn-in window. For replica runs every
/// per-neuron vector is indexed by class and pools the M replicas.
struct SimResult {
  std::vector<double> rates;
  std::vector<double> rate_stderr;  ///< batch-means standard error of each rate
  std::vector<std::uint64_t> spike_counts;
  double elapsed_time = 0.0;
  std::vector<double> isi_mean;
  std::vector<double> isi_variance;
  std::uint64_t candidates = 0;  ///< proposals drawn, accepted or not
  std::vector<Spike> trace;
};

/// Exact event-driven simulation of the network from lambda_i(0) = b_i.
///
/// Between events lambda_i relaxes as b_i + (lambda_i(t0) - b_i) e^{-(t-t0)/tau_i}. Each
/// neuron carries the dominating rate max(lambda_i(t0), b_i), valid because relaxation is
/// monotone toward b_i. A candidate time is drawn from the summed bound, the candidate
/// neuron proportionally to its bound, and the candidate accepted with probability
/// lambda_i(t)/bound_i; the drawn neuron's bound is then refreshed. With every tau
/// infinite the bound is exact, nothing is rejected and this is plain Gillespie.
SimResult simulate_lgl(const NetworkSpec& spec, const SimConfig& cfg);

/// Finite M-replica network: M copies of every class. A spike of (m, i) resets it to r_i
/// and, for each synapse (j, i), raises class j in a replica drawn uniformly from the
/// other M-1 replicas, independently per target and per spike. Routing draws come from
/// a per-replica substream.
SimResult simulate_replica(const NetworkSpec& spec, std::size_t replicas, const SimConfig& cfg);

/// CSV with header `neuron,rate,spikes`.
void write_csv(std::ostream& out, const SimResult& result);

}  // namespace lgl
