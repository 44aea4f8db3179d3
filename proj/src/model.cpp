#include "lgl/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "lgl/error.hpp"
#include "lgl/random.hpp"

namespace lgl {

RateVector::RateVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw InvalidArgument("rate " + std::to_string(i) + " must be positive and finite");
    }
  }
}

std::vector<Violation> validate(const NetworkSpec& spec) {
  std::vector<Violation> out;
  if (spec.K < 1) out.push_back({"network must contain at least one neuron", 0});
  if (spec.tau.size() != spec.K) out.push_back({"tau length differs from K", spec.tau.size()});
  if (spec.b.size() != spec.K) out.push_back({"b length differs from K", spec.b.size()});
  if (spec.r.size() != spec.K) out.push_back({"r length differs from K", spec.r.size()});
  const std::size_t n = std::min({spec.K, spec.tau.size(), spec.b.size(), spec.r.size()});
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = spec.tau[i], b = spec.b[i], r = spec.r[i];
    if (!(tau > 0.0)) out.push_back({"relaxation time must be positive or infinite", i});
    if (!(b > 0.0) || !std::isfinite(b)) out.push_back({"base rate must be strictly positive", i});
    if (!(r > 0.0) || !std::isfinite(r)) out.push_back({"reset must be strictly positive", i});
    if (r > b) out.push_back({"reset must not exceed base rate", i});
    if (is_counting(tau) && r != b) {
      out.push_back({"infinite relaxation time requires reset equal to base rate", i});
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t s = 0; s < spec.synapses.size(); ++s) {
    const Synapse& syn = spec.synapses[s];
    if (syn.post >= spec.K || syn.pre >= spec.K) {
      out.push_back({"synapse index out of range", s});
      continue;
    }
    if (syn.post == syn.pre) out.push_back({"self-synapse forbidden", s});
    if (!(syn.weight >= 0.0) || !std::isfinite(syn.weight)) {
      out.push_back({"synaptic weight must be nonnegative and finite", s});
    }
    if (!seen.emplace(syn.post, syn.pre).second) out.push_back({"duplicate synapse", s});
  }
  return out;
}

void require_valid(const NetworkSpec& spec) {
  const auto violations = validate(spec);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid network:";
  for (const auto& v : violations) msg << " [" << v.index << "] " << v.message << ";";
  throw InvalidArgument(msg.str());
}

std::vector<std::vector<Afferent>> incoming(const NetworkSpec& spec) {
  std::vector<std::vector<Afferent>> adj(spec.K);
  for (const auto& s : spec.synapses) adj[s.post].push_back({s.pre, s.weight});
  return adj;
}

std::vector<std::vector<Efferent>> outgoing(const NetworkSpec& spec) {
  std::vector<std::vector<Efferent>> adj(spec.K);
  for (const auto& s : spec.synapses) adj[s.pre].push_back({s.post, s.weight});
  return adj;
}

std::vector<bool> driving_neurons(const NetworkSpec& spec) {
  std::vector<bool> driving(spec.K, true);
  for (const auto& s : spec.synapses) driving[s.post] = false;
  return driving;
}

void canonicalize(NetworkSpec& spec) {
  std::sort(spec.synapses.begin(), spec.synapses.end(), [](const Synapse& x, const Synapse& y) {
    return std::tie(x.post, x.pre) < std::tie(y.post, y.pre);
  });
}

NetworkSpec make_uniform(std::size_t K, double tau, double base, double reset) {
  NetworkSpec spec;
  spec.K = K;
  spec.tau.assign(K, tau);
  spec.b.assign(K, base);
  spec.r.assign(K, reset);
  return spec;
}

NetworkSpec make_complete(std::size_t K, double tau, double base, double reset, double weight) {
  NetworkSpec spec = make_uniform(K, tau, base, reset);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      if (i != j) spec.synapses.push_back({i, j, weight});
    }
  }
  return spec;
}

namespace {

// Partial Fisher-Yates: the first `count` entries of `pool` become a uniform sample.
void sample_prefix(std::vector<std::size_t>& pool, std::size_t count, Rng& rng) {
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[pick]);
  }
}

double draw_weight(double weight_max, Rng& rng) { return weight_max * rng.uniform_open_left(); }

void require_generator_args(double weight_max, double base, double tau) {
  if (!(weight_max > 0.0) || !std::isfinite(weight_max)) {
    throw InvalidArgument("weight_max must be positive and finite");
  }
  if (!(base > 0.0) || !std::isfinite(base)) throw InvalidArgument("base must be positive");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive or infinite");
}

}  // namespace

NetworkSpec gen_random_recurrent(std::size_t K, std::size_t in_degree, double weight_max,
                                 double base, double tau, std::uint64_t seed) {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  if (in_degree > K - 1) throw InvalidArgument("in_degree must lie in [0, K-1]");
  require_generator_args(weight_max, base, tau);
  NetworkSpec spec = make_uniform(K, tau, base, base);
  Rng rng(seed);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < K; ++i) {
    pool.clear();
    for (std::size_t j = 0; j < K; ++j) {
      if (j != i) pool.push_back(j);
    }
    sample_prefix(pool, in_degree, rng);
    for (std::size_t k = 0; k < in_degree; ++k) {
      spec.synapses.push_back({i, pool[k], draw_weight(weight_max, rng)});
    }
  }
  canonicalize(spec);
  return spec;
}

NetworkSpec gen_feedforward(std::size_t layers, std::size_t width, std::size_t in_degree,
                            double weight_max, double base, double tau, std::uint64_t seed) {
  if (layers < 1 || width < 1) throw InvalidArgument("layers and width must be at least 1");
  if (in_degree > width) throw InvalidArgument("in_degree must not exceed the layer width");
  require_generator_args(weight_max, base, tau);
  NetworkSpec spec = make_uniform(layers * width, tau, base, base);
  Rng rng(seed);
  std::vector<std::size_t> pool(width);
  for (std::size_t layer = 1; layer < layers; ++layer) {
    const std::size_t prev = (layer - 1) * width;
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t post = layer * width + k;
      std::iota(pool.begin(), pool.end(), prev);
      sample_prefix(pool, in_degree, rng);
      for (std::size_t d = 0; d < in_degree; ++d) {
        spec.synapses.push_back({post, pool[d], draw_weight(weight_max, rng)});
      }
    }
  }
  canonicalize(spec);
  return spec;
}

namespace {

std::string number(double x) { return nlohmann::json(x).dump(); }

double read_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string("expected a number in ") + what);
  return j.get<double>();
}

std::vector<double> read_array(const nlohmann::json& doc, const char* key, bool allow_null) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw FormatError(std::string("missing array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& x : doc[key]) {
    if (allow_null && x.is_null()) {
      out.push_back(kInfiniteTau);
    } else {
      out.push_back(read_number(x, key));
    }
  }
  return out;
}

std::size_t read_index(const nlohmann::json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw FormatError("synapse indices must be nonnegative integers");
  }
  return j.get<std::size_t>();
}

}  // namespace

std::string save(const NetworkSpec& spec) {
  NetworkSpec canon = spec;
  canonicalize(canon);
  std::ostringstream out;
  auto write_list = [&](const char* key, const std::vector<double>& xs, bool null_inf) {
    out << "  \"" << key << "\": [";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out << ", ";
      out << ((null_inf && is_counting(xs[i])) ? std::string("null") : number(xs[i]));
    }
    out << "],\n";
  };
  out << "{\n  \"K\": " << canon.K << ",\n";
  write_list("tau", canon.tau, true);
  write_list("b", canon.b, false);
  write_list("r", canon.r, false);
  out << "  \"synapses\": [";
  for (std::size_t s = 0; s < canon.synapses.size(); ++s) {
    const auto& syn = canon.synapses[s];
    out << (s ? ",\n    " : "\n    ") << "[" << syn.post << ", " << syn.pre << ", "
        << number(syn.weight) << "]";
  }
  out << (canon.synapses.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

NetworkSpec load(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("network document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("network document must be a JSON object");
  if (!doc.contains("K") || !doc["K"].is_number_integer() || doc["K"].get<long long>() < 0) {
    throw FormatError("\"K\" must be a nonnegative integer");
  }
  NetworkSpec spec;
  spec.K = doc["K"].get<std::size_t>();
  spec.tau = read_array(doc, "tau", true);
  spec.b = read_array(doc, "b", false);
  spec.r = read_array(doc, "r", false);
  if (!doc.contains("synapses") || !doc["synapses"].is_array()) {
    throw FormatError("missing array \"synapses\"");
  }
  for (const auto& entry : doc["synapses"]) {
    if (!entry.is_array() || entry.size() != 3) {
      throw FormatError("each synapse must be a [post, pre, weight] triple");
    }
    spec.synapses.push_back(
        {read_index(entry[0]), read_index(entry[1]), read_number(entry[2], "synapses")});
  }
  canonicalize(spec);
  require_valid(spec);
  return spec;
}

std::uint64_t spec_hash(const NetworkSpec& spec) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : save(spec)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lgl
