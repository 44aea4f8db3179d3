#include "lgl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "lgl/error.hpp"
#include "lgl/rmf_solver.hpp"
#include "lgl/tmf_solver.hpp"

namespace lgl {
namespace {

using nlohmann::json;

MethodSummary summarize(const std::vector<ComparisonRow>& rows, double ComparisonRow::*err,
                        bool all) {
  MethodSummary out;
  std::size_t n = 0;
  for (const ComparisonRow& row : rows) {
    if (row.driving && !all) continue;
    out.mean_rel_err += row.*err;
    out.max_rel_err = std::max(out.max_rel_err, row.*err);
    ++n;
  }
  if (n > 0) out.mean_rel_err /= static_cast<double>(n);
  return out;
}

double tau_field(const json& j) {
  if (!j.contains("tau") || j["tau"].is_null()) return kInfiniteTau;
  if (!j["tau"].is_number()) throw FormatError("scenario tau must be a number or null");
  return j["tau"].get<double>();
}

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("bad value for \"") + key + "\" in scenario config");
  }
}

}  // namespace

ComparisonReport run_comparison(const NetworkSpec& spec, const SimConfig& sim_cfg,
                                const SolverConfig& solver_cfg) {
  require_valid(spec);
  require_valid(solver_cfg);
  ComparisonReport report;
  report.spec_hash = spec_hash(spec);
  report.sim = sim_cfg;
  report.solver = solver_cfg;

  const SimResult sim = simulate_lgl(spec, sim_cfg);
  const SolveReport rmf = solve_rmf(spec, solver_cfg);
  const SolveReport tmf = solve_tmf(spec, solver_cfg);
  report.rmf_converged = rmf.converged;
  report.tmf_converged = tmf.converged;
  report.rmf_iterations = rmf.iterations;
  report.tmf_iterations = tmf.iterations;

  const std::vector<bool> driving = driving_neurons(spec);
  const bool all = std::all_of(driving.begin(), driving.end(), [](bool d) { return d; });
  std::size_t counted = 0;
  for (std::size_t i = 0; i < spec.K; ++i) {
    ComparisonRow row;
    row.neuron = i;
    row.rate_sim = sim.rates[i];
    row.sim_stderr = sim.rate_stderr[i];
    row.rate_rmf = rmf.beta[i];
    row.rate_tmf = tmf.beta[i];
    // A neuron that never fired after burn-in has no finite relative error.
    const double denom = row.rate_sim > 0.0 ? row.rate_sim : std::nan("");
    row.err_rmf = std::fabs(row.rate_rmf - row.rate_sim) / denom;
    row.err_tmf = std::fabs(row.rate_tmf - row.rate_sim) / denom;
    row.driving = driving[i];
    if (all || !row.driving) {
      report.mean_rel_stderr += row.sim_stderr / denom;
      ++counted;
    }
    report.rows.push_back(row);
  }
  if (counted > 0) report.mean_rel_stderr /= static_cast<double>(counted);
  report.rmf = summarize(report.rows, &ComparisonRow::err_rmf, all);
  report.tmf = summarize(report.rows, &ComparisonRow::err_tmf, all);
  return report;
}

ScenarioFile default_scenarios() {
  ScenarioFile f;
  f.scenarios = {
      {"dense-recurrent", "recurrent", 100, 0, 0, 50, 0.02, 1.0, kInfiniteTau},
      {"sparse-recurrent", "recurrent", 100, 0, 0, 5, 1.0, 1.0, kInfiniteTau},
      {"dense-feedforward", "feedforward", 0, 10, 40, 40, 0.02, 1.0, kInfiniteTau},
      {"sparse-feedforward", "feedforward", 0, 10, 40, 3, 1.0, 1.0, kInfiniteTau},
  };
  return f;
}

ScenarioFile load_scenarios(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scenario config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("scenario config must be a JSON object");
  ScenarioFile f;
  f.version = field(doc, "version", 0);
  if (f.version != 1) throw FormatError("unsupported scenario config version");
  f.events = field<std::uint64_t>(doc, "events", f.events);
  f.max_iter = field(doc, "max_iter", f.max_iter);
  f.fp_tol = field(doc, "fp_tol", f.fp_tol);
  if (!doc.contains("scenarios") || !doc["scenarios"].is_array()) {
    throw FormatError("scenario config needs a \"scenarios\" array");
  }
  for (const json& s : doc["scenarios"]) {
    ScenarioConfig sc;
    sc.name = field<std::string>(s, "name", "");
    sc.topology = field<std::string>(s, "topology", "");
    sc.K = field<std::size_t>(s, "K", 0);
    sc.layers = field<std::size_t>(s, "layers", 0);
    sc.width = field<std::size_t>(s, "width", 0);
    sc.in_degree = field<std::size_t>(s, "in_degree", 0);
    sc.weight_max = field(s, "weight_max", 0.0);
    sc.base = field(s, "base", 1.0);
    sc.tau = tau_field(s);
    if (sc.name.empty()) throw FormatError("every scenario needs a name");
    if (sc.topology != "recurrent" && sc.topology != "feedforward") {
      throw FormatError("scenario topology must be recurrent or feedforward");
    }
    f.scenarios.push_back(sc);
  }
  return f;
}

ScenarioFile installed_scenarios() {
#ifdef LGL_SCENARIO_CONFIG
  std::ifstream in(LGL_SCENARIO_CONFIG);
  if (in) {
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenarios(buf.str());
  }
#endif
  return default_scenarios();
}

NetworkSpec build_scenario(const ScenarioConfig& sc, std::uint64_t seed) {
  if (sc.topology == "recurrent") {
    return gen_random_recurrent(sc.K, sc.in_degree, sc.weight_max, sc.base, sc.tau, seed);
  }
  if (sc.topology == "feedforward") {
    return gen_feedforward(sc.layers, sc.width, sc.in_degree, sc.weight_max, sc.base, sc.tau,
                           seed);
  }
  throw InvalidArgument("unknown topology " + sc.topology);
}

ComparisonReport run_scenario(const std::string& name, std::uint64_t seed,
                              const ScenarioOptions& opts) {
  const ScenarioFile file = opts.file.value_or(installed_scenarios());
  const auto it = std::find_if(file.scenarios.begin(), file.scenarios.end(),
                               [&](const ScenarioConfig& s) { return s.name == name; });
  if (it == file.scenarios.end()) throw InvalidArgument("unknown scenario " + name);

  const NetworkSpec spec = build_scenario(*it, seed);
  SimConfig sim;
  sim.max_events = opts.events.value_or(file.events);
  sim.seed = seed + 1;
  SolverConfig solver;
  solver.max_iter = opts.max_iter.value_or(file.max_iter);
  solver.fp_tol = opts.fp_tol.value_or(file.fp_tol);
  ComparisonReport report = run_comparison(spec, sim, solver);
  report.scenario = name;
  report.graph_seed = seed;
  return report;
}

ReplicaTable run_replica_convergence(const NetworkSpec& spec, const std::vector<std::size_t>& M_list,
                                     const SimConfig& sim_cfg, const SolverConfig& solver_cfg) {
  for (std::size_t M : M_list) {
    if (M < 2) throw InvalidArgument("replica counts must be at least 2");
  }
  const SolveReport rmf = solve_rmf(spec, solver_cfg);
  ReplicaTable table{rmf.beta, {}};
  for (std::size_t M : M_list) {
    const SimResult sim = simulate_replica(spec, M, sim_cfg);
    ReplicaRow row{M, sim.rates, std::vector<double>(spec.K), 0.0};
    for (std::size_t i = 0; i < spec.K; ++i) {
      row.gaps[i] = std::fabs(sim.rates[i] - rmf.beta[i]) / rmf.beta[i];
      row.sup_gap = std::max(row.sup_gap, row.gaps[i]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(std::ostream& out, const ComparisonReport& report) {
  const auto old = out.precision(12);
  out << "neuron,rate_sim,rate_rmf,rate_tmf,err_rmf,err_tmf\n";
  for (const ComparisonRow& r : report.rows) {
    out << r.neuron << ',' << r.rate_sim << ',' << r.rate_rmf << ',' << r.rate_tmf << ','
        << r.err_rmf << ',' << r.err_tmf << '\n';
  }
  out.precision(old);
}

void write_summary_csv(std::ostream& out, const ComparisonReport& report) {
  const auto old = out.precision(12);
  out << "method,mean_rel_err,max_rel_err\n";
  out << "rmf," << report.rmf.mean_rel_err << ',' << report.rmf.max_rel_err << '\n';
  out << "tmf," << report.tmf.mean_rel_err << ',' << report.tmf.max_rel_err << '\n';
  out.precision(old);
}

void write_json(std::ostream& out, const ComparisonReport& report) {
  json rows = json::array();
  for (const ComparisonRow& r : report.rows) {
    rows.push_back({{"neuron", r.neuron},
                    {"rate_sim", r.rate_sim},
                    {"sim_stderr", r.sim_stderr},
                    {"rate_rmf", r.rate_rmf},
                    {"rate_tmf", r.rate_tmf},
                    {"err_rmf", r.err_rmf},
                    {"err_tmf", r.err_tmf},
                    {"driving", r.driving}});
  }
  json doc = {
      {"scenario", report.scenario},
      {"spec_hash", report.spec_hash},
      {"graph_seed", report.graph_seed},
      {"sim", {{"seed", report.sim.seed},
               {"events", report.sim.max_events},
               {"burn_in_fraction", report.sim.burn_in_fraction},
               {"batches", report.sim.batches}}},
      {"solver", {{"fp_tol", report.solver.fp_tol},
                  {"max_iter", report.solver.max_iter},
                  {"quad_rel_tol", report.solver.quad_rel_tol},
                  {"quad_abs_tol", report.solver.quad_abs_tol},
                  {"tail_tol", report.solver.tail_tol}}},
      {"rmf", {{"mean_rel_err", report.rmf.mean_rel_err},
               {"max_rel_err", report.rmf.max_rel_err},
               {"converged", report.rmf_converged},
               {"iterations", report.rmf_iterations}}},
      {"tmf", {{"mean_rel_err", report.tmf.mean_rel_err},
               {"max_rel_err", report.tmf.max_rel_err},
               {"converged", report.tmf_converged},
               {"iterations", report.tmf_iterations}}},
      {"mean_rel_stderr", report.mean_rel_stderr},
      {"rows", rows},
  };
  out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const ReplicaTable& table) {
  const auto old = out.precision(12);
  out << "M,neuron,rate,rate_rmf,gap\n";
  for (const ReplicaRow& row : table.rows) {
    for (std::size_t i = 0; i < row.rates.size(); ++i) {
      out << row.M << ',' << i << ',' << row.rates[i] << ',' << table.rmf[i] << ','
          << row.gaps[i] << '\n';
    }
  }
  out.precision(old);
}

void write_json(std::ostream& out, const ReplicaTable& table) {
  json rows = json::array();
  for (const ReplicaRow& row : table.rows) {
    rows.push_back({{"M", row.M}, {"rates", row.rates}, {"gaps", row.gaps}, {"sup_gap", row.sup_gap}});
  }
  json rmf(std::vector<double>(table.rmf.begin(), table.rmf.end()));
  out << json{{"rate_rmf", rmf}, {"rows", rows}}.dump(2) << '\n';
}

}  // namespace lgl
