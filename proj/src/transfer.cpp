#include "lgl/transfer.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "lgl/error.hpp"
#include "lgl/model.hpp"
#include "lgl/specfun.hpp"

namespace lgl {

double transfer_eval(const TransferQuery& q, const SolverConfig& cfg) {
  require_valid(cfg);
  if (is_counting(q.tau) && q.r != q.b) {
    throw InvalidArgument("infinite relaxation time requires reset equal to base rate");
  }
  const RenewalNeuron neuron(q.tau, q.b, q.r, q.inputs);
  return 1.0 / neuron.mean_interval(cfg);
}

double sqrt_asymptote(const TransferQuery& q) {
  double drive = 0.0;
  for (const Input& in : q.inputs) drive += in.weight * in.rate;
  if (!(drive > 0.0)) throw InvalidArgument("asymptote needs a nonzero interaction");
  return std::sqrt(2.0 / std::numbers::pi * drive);
}

SaturationBound saturation_bound(const TransferQuery& q) {
  if (!(q.b >= q.r && q.r > 0.0)) throw InvalidArgument("need b >= r > 0");
  if (!(q.tau > 0.0)) throw InvalidArgument("tau must be positive");
  double total = 0.0;
  for (const Input& in : q.inputs) total += in.rate;
  const double level = q.b + total;
  SaturationBound out;
  if (q.b == q.r) {
    out.beta_bar = level;
  } else if (is_counting(q.tau)) {
    throw InvalidArgument("infinite relaxation time requires reset equal to base rate");
  } else {
    // e^{-a} A^B / (tau gamma(B, a)) with a = tau(b-r), B = tau(b + sum beta)
    out.beta_bar = level / std::exp(specfun::log_confluent_series(q.tau * level, q.tau * (q.b - q.r)));
  }
  double ratio = 0.0;
  for (const Input& in : q.inputs) {
    if (in.rate == 0.0) continue;
    if (in.weight == 0.0) return out;
    ratio += in.rate / in.weight;
  }
  out.corrected = out.beta_bar * (1.0 - ratio);
  return out;
}

std::vector<TransferRow> transfer_sweep(const TransferQuery& q, SweepKind kind,
                                        std::span<const double> values, const SolverConfig& cfg) {
  std::vector<TransferRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    TransferQuery at = q;
    for (Input& in : at.inputs) (kind == SweepKind::Rate ? in.rate : in.weight) = v;
    TransferRow row{v, transfer_eval(at, cfg), std::nullopt, 0.0, std::nullopt};
    double drive = 0.0;
    for (const Input& in : at.inputs) drive += in.weight * in.rate;
    if (drive > 0.0) row.asymptote = sqrt_asymptote(at);
    const SaturationBound bound = saturation_bound(at);
    row.beta_bar = bound.beta_bar;
    row.corrected = bound.corrected;
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<TransferRow>& rows) {
  const auto old = out.precision(12);
  out << "sweep_value,F,sqrt_asymptote,beta_bar,corrected\n";
  for (const TransferRow& row : rows) {
    out << row.sweep_value << ',' << row.F << ',';
    if (row.asymptote) out << *row.asymptote;
    out << ',' << row.beta_bar << ',';
    if (row.corrected) out << *row.corrected;
    out << '\n';
  }
  out.precision(old);
}

}  // namespace lgl
