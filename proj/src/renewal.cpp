#include "lgl/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lgl/error.hpp"
#include "lgl/quadrature.hpp"
#include "lgl/specfun.hpp"

namespace lgl {
namespace {

// Above this tau*mu the Ei values are handled in exponentially scaled form.
constexpr double kScaledEiThreshold = 40.0;

}  // namespace

double h_self(double tau, double base, double x) {
  if (is_counting(tau)) return 0.0;
  return base * (tau * std::expm1(x / tau) - x);
}

double l_reset(double tau, double reset, double x) {
  if (is_counting(tau)) return reset * x;
  return tau * reset * std::expm1(x / tau);
}

double h_pair(double tau, double weight, double x) {
  if (weight == 0.0) return 0.0;
  if (is_counting(tau)) return std::expm1(weight * x) / weight - x;

  using specfun::expint_ei_minus_log;
  const double m = tau * weight;
  const double a = m * std::exp(x / tau);
  if (m <= kScaledEiThreshold) {
    // Ei(a) - Ei(m) = x/tau + R(a) - R(m) with R(z) = Ei(z) - ln z, so the logarithmic
    // singularity as a -> 0 cancels analytically.
    const double regular = expint_ei_minus_log(m) - expint_ei_minus_log(a);
    return x * std::expm1(-m) - tau * std::exp(-m) * regular;
  }
  // Large tau*mu: e^{-m} Ei(a) = e^{a-m} [e^{-a} Ei(a)].
  const double shifted =
      a > kScaledEiThreshold
          ? std::exp(m * std::expm1(x / tau)) * specfun::expint_ei_scaled(a)
          : std::exp(-m) * (std::log(m) + x / tau + expint_ei_minus_log(a));
  return tau * (shifted - specfun::expint_ei_scaled(m)) - x;
}

RenewalNeuron::RenewalNeuron(double tau, double base, double reset, std::vector<Input> inputs)
    : tau_(tau), base_(base), reset_(reset), inputs_(std::move(inputs)) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive or infinite");
  if (!(base > 0.0) || !(reset > 0.0) || reset > base) {
    throw InvalidArgument("need base >= reset > 0");
  }
  for (const Input& in : inputs_) {
    if (!(in.rate >= 0.0) || !std::isfinite(in.rate)) {
      throw InvalidArgument("input rates must be nonnegative and finite");
    }
    if (!(in.weight >= 0.0) || !std::isfinite(in.weight)) {
      throw InvalidArgument("input weights must be nonnegative and finite");
    }
  }
  // The drive is linear in the rates, so inputs sharing a weight collapse into one and
  // inactive inputs drop out.
  std::erase_if(inputs_, [](const Input& in) { return in.rate == 0.0 || in.weight == 0.0; });
  std::sort(inputs_.begin(), inputs_.end(),
            [](const Input& x, const Input& y) { return x.weight < y.weight; });
  std::vector<Input> merged;
  for (const Input& in : inputs_) {
    if (!merged.empty() && merged.back().weight == in.weight) {
      merged.back().rate += in.rate;
    } else {
      merged.push_back(in);
    }
  }
  inputs_ = std::move(merged);
}

double RenewalNeuron::cumulative_drive(double u) const {
  double total = h_self(tau_, base_, u);
  for (const Input& in : inputs_) {
    total += in.rate * h_pair(tau_, in.weight, u);
  }
  return total;
}

double RenewalNeuron::log_survival(double v) const {
  return l_reset(tau_, reset_, v) - cumulative_drive(v);
}

double RenewalNeuron::hazard(double v) const {
  double rate;
  double decay = 0.0;
  if (is_counting(tau_)) {
    rate = reset_;
  } else {
    decay = std::expm1(v / tau_);  // e^{v/tau} - 1, in (-1, 0]
    rate = base_ - (base_ - reset_) * (decay + 1.0);
  }
  for (const Input& in : inputs_) {
    const double exponent = is_counting(tau_) ? in.weight * v : tau_ * in.weight * decay;
    rate -= in.rate * std::expm1(exponent);
  }
  return rate;
}

double RenewalNeuron::truncation_point(double upper, double tail_tol) const {
  const double ref = log_survival(upper);
  const double scale = 1.0 / hazard(upper);
  // The integrand increases with v, so (upper - v) e^{f(v)} bounds the mass on [v, upper].
  double mass_lower = 0.0;
  for (int k = -20; k <= 20; ++k) {
    const double width = scale * std::ldexp(1.0, k);
    mass_lower = std::max(mass_lower, width * std::exp(log_survival(upper - width) - ref));
  }
  // Concavity: the tail beyond v is at most e^{f(v)} / f'(v).
  double width = scale;
  for (int k = 0; k < 2000; ++k) {
    const double v = upper - width;
    const double tail = std::exp(log_survival(v) - ref) / hazard(v);
    if (tail <= tail_tol * mass_lower) return v;
    width *= 2.0;
  }
  throw QuadratureError("could not bound the integration tail");
}

double RenewalNeuron::normalised_integral(double upper, const SolverConfig& cfg) const {
  const double lower = truncation_point(upper, cfg.tail_tol);
  const double ref = log_survival(upper);
  // Geometric breakpoints concentrate the initial partition near the upper limit, where
  // large weights put the sharpest features.
  std::vector<double> points;
  const double span = upper - lower;
  points.push_back(lower);
  for (int k = 1; k <= 24; ++k) points.push_back(upper - span * std::ldexp(1.0, -k));
  points.push_back(upper);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const auto result = quad::integrate([&](double v) { return std::exp(log_survival(v) - ref); },
                                      points, cfg.quad_abs_tol, cfg.quad_rel_tol);
  return result.value;
}

double RenewalNeuron::mean_interval(const SolverConfig& cfg) const {
  return normalised_integral(0.0, cfg);
}

double RenewalNeuron::mgf(double beta, double u, const SolverConfig& cfg) const {
  if (u > 0.0) throw InvalidArgument("mgf is evaluated for u <= 0 only");
  if (!is_counting(tau_) && !(u > -tau_)) throw InvalidArgument("mgf needs u > -tau");
  // The integral representation is in x with u = tau (e^{x/tau} - 1); there
  // (1 + u/tau) d/du = d/dx and the first-order equation integrates directly.
  const double x = is_counting(tau_) ? u : tau_ * std::log1p(u / tau_);
  // cumulative_drive(x) + log_survival(x) = l(x)
  return beta * std::exp(l_reset(tau_, reset_, x)) * normalised_integral(x, cfg);
}

}  // namespace lgl
