#include "lgl/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

#include "lgl/error.hpp"
#include "lgl/random.hpp"

namespace lgl {
namespace {

// Complete binary tree of partial sums over nonnegative leaf weights. Parents are
// recomputed from their children on every update, so no rounding drift accumulates.
class SumTree {
 public:
  explicit SumTree(std::size_t n) {
    while (capacity_ < n) capacity_ *= 2;
    nodes_.assign(2 * capacity_, 0.0);
  }

  void set(std::size_t leaf, double weight) {
    std::size_t k = leaf + capacity_;
    nodes_[k] = weight;
    for (k /= 2; k >= 1; k /= 2) nodes_[k] = nodes_[2 * k] + nodes_[2 * k + 1];
  }

  [[nodiscard]] double total() const { return nodes_[1]; }

  /// Leaf whose cumulative interval contains `target`, 0 <= target < total().
  [[nodiscard]] std::size_t select(double target) const {
    std::size_t k = 1;
    while (k < capacity_) {
      const double left = nodes_[2 * k];
      if (target < left || nodes_[2 * k + 1] <= 0.0) {
        k = 2 * k;
      } else {
        target -= left;
        k = 2 * k + 1;
      }
    }
    return k - capacity_;
  }

 private:
  std::size_t capacity_ = 1;
  std::vector<double> nodes_;
};

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  [[nodiscard]] double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

class Engine {
 public:
  Engine(const NetworkSpec& spec, std::size_t replicas, const SimConfig& cfg)
      : K_(spec.K),
        M_(replicas),
        cfg_(cfg),
        tau_(spec.tau),
        base_(spec.b),
        reset_(spec.r),
        targets_(outgoing(spec)),
        tree_(K_ * M_),
        lam0_(K_ * M_),
        t0_(K_ * M_, 0.0),
        bound_(K_ * M_),
        last_spike_(K_ * M_, -1.0),
        rng_(cfg.seed, 0) {
    for (std::size_t m = 0; m < M_; ++m) routing_.emplace_back(cfg.seed, m + 1);
    for (std::size_t u = 0; u < K_ * M_; ++u) {
      lam0_[u] = base_[cls(u)];
      bound_[u] = lam0_[u];
      tree_.set(u, bound_[u]);
    }
  }

  SimResult run() {
    const std::uint64_t total_events = cfg_.max_events;
    const auto burn = static_cast<std::uint64_t>(
        std::floor(cfg_.burn_in_fraction * static_cast<double>(total_events)));
    const std::uint64_t post = total_events - burn;
    const std::uint64_t batches =
        std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(cfg_.batches, 1)), 1, post);
    const std::uint64_t batch_len = post / batches;

    std::vector<std::vector<std::uint64_t>> batch_counts(batches,
                                                         std::vector<std::uint64_t>(K_, 0));
    std::vector<double> batch_time(batches, 0.0);
    std::vector<Welford> isi(K_);
    SimResult result;

    double t = 0.0;
    double t_burn = 0.0;
    double batch_start = 0.0;
    std::uint64_t events = 0;
    while (events < total_events) {
      const double total = tree_.total();
      t += rng_.exponential(total);
      const std::size_t u = tree_.select(rng_.uniform() * total);
      ++result.candidates;
      const double lam = intensity(u, t);
      assert(lam <= bound_[u] * (1.0 + 1e-12));
      if (!is_counting(tau_[cls(u)])) {
        const bool accept = rng_.uniform() * bound_[u] < lam;
        refresh(u, lam, t);
        if (!accept) continue;
      }
      fire(u, t);
      ++events;
      if (events <= burn) {
        if (events == burn) {
          t_burn = t;
          batch_start = t;
        }
        continue;
      }
      const std::uint64_t k = events - burn - 1;
      const std::uint64_t batch = std::min(k / batch_len, batches - 1);
      ++batch_counts[batch][cls(u)];
      if (record_batch_end(k, batch, batch_len, batches, post)) {
        batch_time[batch] = t - batch_start;
        batch_start = t;
      }
      if (last_spike_[u] >= 0.0) isi[cls(u)].add(t - last_spike_[u]);
      last_spike_[u] = t;
      if (cfg_.record_trace) result.trace.push_back({t, u});
    }

    result.elapsed_time = t - t_burn;
    const double scale = static_cast<double>(M_) * result.elapsed_time;
    result.rates.assign(K_, 0.0);
    result.rate_stderr.assign(K_, 0.0);
    result.spike_counts.assign(K_, 0);
    result.isi_mean.assign(K_, 0.0);
    result.isi_variance.assign(K_, 0.0);
    for (std::size_t i = 0; i < K_; ++i) {
      std::uint64_t count = 0;
      for (std::uint64_t b = 0; b < batches; ++b) count += batch_counts[b][i];
      result.spike_counts[i] = count;
      const double rate = static_cast<double>(count) / result.elapsed_time;
      result.rates[i] = rate / static_cast<double>(M_);
      if (batches > 1) {
        double ss = 0.0;
        for (std::uint64_t b = 0; b < batches; ++b) {
          const double e = static_cast<double>(batch_counts[b][i]) - rate * batch_time[b];
          ss += e * e;
        }
        const double nb = static_cast<double>(batches);
        result.rate_stderr[i] = std::sqrt(nb / (nb - 1.0) * ss) / scale;
      }
      result.isi_mean[i] = isi[i].mean;
      result.isi_variance[i] = isi[i].variance();
    }
    return result;
  }

 private:
  [[nodiscard]] std::size_t cls(std::size_t u) const { return u % K_; }

  static bool record_batch_end(std::uint64_t k, std::uint64_t batch, std::uint64_t batch_len,
                               std::uint64_t batches, std::uint64_t post) {
    if (batch + 1 == batches) return k + 1 == post;
    return (k + 1) % batch_len == 0;
  }

  [[nodiscard]] double intensity(std::size_t u, double t) const {
    const std::size_t i = cls(u);
    if (is_counting(tau_[i])) return lam0_[u];
    return base_[i] + (lam0_[u] - base_[i]) * std::exp(-(t - t0_[u]) / tau_[i]);
  }

  void refresh(std::size_t u, double lam, double t) {
    lam0_[u] = lam;
    t0_[u] = t;
    bound_[u] = std::max(lam, base_[cls(u)]);
    tree_.set(u, bound_[u]);
  }

  void fire(std::size_t u, double t) {
    const std::size_t i = cls(u);
    const std::size_t m = u / K_;
    refresh(u, reset_[i], t);
    for (const Efferent& e : targets_[i]) {
      std::size_t replica = m;
      if (M_ > 1) {
        const auto k = static_cast<std::size_t>(routing_[m].below(M_ - 1));
        replica = k < m ? k : k + 1;
      }
      const std::size_t v = replica * K_ + e.target;
      refresh(v, intensity(v, t) + e.weight, t);
    }
  }

  std::size_t K_;
  std::size_t M_;
  SimConfig cfg_;
  std::vector<double> tau_, base_, reset_;
  std::vector<std::vector<Efferent>> targets_;
  SumTree tree_;
  std::vector<double> lam0_, t0_, bound_, last_spike_;
  Rng rng_;
  std::vector<Rng> routing_;
};

void require_events(const SimConfig& cfg) {
  if (cfg.max_events < 1) throw InvalidArgument("max_events must be at least 1");
  if (!(cfg.burn_in_fraction >= 0.0 && cfg.burn_in_fraction < 1.0)) {
    throw InvalidArgument("burn_in_fraction must lie in [0, 1)");
  }
  const auto burn = static_cast<std::uint64_t>(
      std::floor(cfg.burn_in_fraction * static_cast<double>(cfg.max_events)));
  if (burn >= cfg.max_events) throw InvalidArgument("burn-in leaves no events to measure");
}

}  // namespace

SimResult simulate_lgl(const NetworkSpec& spec, const SimConfig& cfg) {
  require_valid(spec);
  require_events(cfg);
  return Engine(spec, 1, cfg).run();
}

SimResult simulate_replica(const NetworkSpec& spec, std::size_t replicas, const SimConfig& cfg) {
  require_valid(spec);
  require_events(cfg);
  if (replicas < 2) throw InvalidArgument("replica count must be at least 2");
  return Engine(spec, replicas, cfg).run();
}

void write_csv(std::ostream& out, const SimResult& result) {
  const auto old = out.precision(12);
  out << "neuron,rate,spikes\n";
  for (std::size_t i = 0; i < result.rates.size(); ++i) {
    out << i << ',' << result.rates[i] << ',' << result.spike_counts[i] << '\n';
  }
  out.precision(old);
}

}  // namespace lgl
