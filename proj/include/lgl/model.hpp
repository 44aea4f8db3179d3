#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lgl {

/// Relaxation time used for the counting-synapse limit (no relaxation).
inline constexpr double kInfiniteTau = std::numeric_limits<double>::infinity();

inline bool is_counting(double tau) { return std::isinf(tau); }

/// A synapse onto neuron `post` from neuron `pre`; a spike of `pre` raises the
/// intensity of `post` by `weight`. Indices are 0-based.
struct Synapse {
  std::size_t post = 0;
  std::size_t pre = 0;
  double weight = 0.0;

  bool operator==(const Synapse&) const = default;
};

/// Full parameterisation of a linear Galves-Loecherbach network.
struct NetworkSpec {
  std::size_t K = 0;
  std::vector<double> tau;  ///< relaxation times; kInfiniteTau for counting synapses
  std::vector<double> b;    ///< base rates
  std::vector<double> r;    ///< reset values
  std::vector<Synapse> synapses;

  bool operator==(const NetworkSpec&) const = default;
};

/// Per-neuron stationary firing rates; every entry strictly positive and finite.
class RateVector {
 public:
  RateVector() = default;
  explicit RateVector(std::vector<double> values);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] auto begin() const { return values_.begin(); }
  [[nodiscard]] auto end() const { return values_.end(); }

  bool operator==(const RateVector&) const = default;

 private:
  std::vector<double> values_;
};

struct Violation {
  std::string message;
  std::size_t index = 0;  ///< offending neuron, or synapse position for synapse violations
};

/// Every invariant violation of `spec`; empty means the network is valid.
std::vector<Violation> validate(const NetworkSpec& spec);

/// Throws InvalidArgument listing the violations when `spec` is not valid.
void require_valid(const NetworkSpec& spec);

/// Adjacency views derived from the synapse list.
struct Afferent {
  std::size_t source;
  double weight;
};
struct Efferent {
  std::size_t target;
  double weight;
};
std::vector<std::vector<Afferent>> incoming(const NetworkSpec& spec);
std::vector<std::vector<Efferent>> outgoing(const NetworkSpec& spec);

/// Neurons with no presynaptic partners (the driving layer of a feedforward net).
std::vector<bool> driving_neurons(const NetworkSpec& spec);

/// Sorts synapses by (post, pre).
void canonicalize(NetworkSpec& spec);

/// Homogeneous network with identical parameters and no synapses.
NetworkSpec make_uniform(std::size_t K, double tau, double base, double reset);

/// Complete graph with a common weight on every ordered pair.
NetworkSpec make_complete(std::size_t K, double tau, double base, double reset, double weight);

/// Random recurrent network: every neuron receives exactly `in_degree` partners drawn
/// uniformly without replacement from the other neurons; weights uniform on (0, weight_max].
/// Base and reset are both set to `base`.
NetworkSpec gen_random_recurrent(std::size_t K, std::size_t in_degree, double weight_max,
                                 double base, double tau, std::uint64_t seed);

/// Layered feedforward network of `layers` x `width` neurons (layer-major indexing). The
/// first layer has no inputs; every other neuron receives exactly `in_degree` partners from
/// the previous layer.
NetworkSpec gen_feedforward(std::size_t layers, std::size_t width, std::size_t in_degree,
                            double weight_max, double base, double tau, std::uint64_t seed);

/// JSON network document; see README for the schema. Output is canonical.
std::string save(const NetworkSpec& spec);

/// Parses a network document. Throws FormatError on malformed input and InvalidArgument
/// when the decoded network violates an invariant.
NetworkSpec load(const std::string& text);

/// FNV-1a hash of the canonical document, for run provenance.
std::uint64_t spec_hash(const NetworkSpec& spec);

}  // namespace lgl
