#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lgl/model.hpp"
#include "lgl/simulator.hpp"
#include "lgl/solver_config.hpp"

namespace lgl {

struct ComparisonRow {
  std::size_t neuron = 0;
  double rate_sim = 0.0;
  double sim_stderr = 0.0;
  double rate_rmf = 0.0;
  double rate_tmf = 0.0;
  double err_rmf = 0.0;  ///< |rate_rmf - rate_sim| / rate_sim
  double err_tmf = 0.0;
  bool driving = false;  ///< no presynaptic partners; excluded from the aggregates
};

struct MethodSummary {
  double mean_rel_err = 0.0;
  double max_rel_err = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  MethodSummary rmf;
  MethodSummary tmf;
  /// Mean over the aggregated neurons of sim_stderr / rate_sim.
  double mean_rel_stderr = 0.0;
  bool rmf_converged = false;
  bool tmf_converged = false;
  int rmf_iterations = 0;
  int tmf_iterations = 0;
  std::string scenario;  ///< empty for ad hoc comparisons
  std::uint64_t spec_hash = 0;
  std::uint64_t graph_seed = 0;
  SimConfig sim;
  SolverConfig solver;
};

/// Simulates `spec` and solves both mean-field systems on it. Aggregates are taken over
/// non-driving neurons, or over every neuron when all of them are driving. A solver that
/// fails to converge is flagged in the report and its last iterate is still compared.
ComparisonReport run_comparison(const NetworkSpec& spec, const SimConfig& sim_cfg,
                                const SolverConfig& solver_cfg);

struct ScenarioConfig {
  std::string name;
  std::string topology;  ///< "recurrent" or "feedforward"
  std::size_t K = 0;       ///< recurrent
  std::size_t layers = 0;  ///< feedforward
  std::size_t width = 0;   ///< feedforward
  std::size_t in_degree = 0;
  double weight_max = 0.0;
  double base = 1.0;
  double tau = kInfiniteTau;
};

struct ScenarioFile {
  int version = 1;
  std::uint64_t events = 1'000'000;
  int max_iter = 100;
  double fp_tol = 1e-8;
  std::vector<ScenarioConfig> scenarios;
};

/// Built-in copy of config/scenarios.json.
ScenarioFile default_scenarios();
ScenarioFile load_scenarios(const std::string& text);
/// The file named by LGL_SCENARIO_CONFIG when readable, otherwise the built-in defaults.
ScenarioFile installed_scenarios();

NetworkSpec build_scenario(const ScenarioConfig& sc, std::uint64_t seed);

struct ScenarioOptions {
  std::optional<std::uint64_t> events;  ///< overrides the file default
  std::optional<int> max_iter;
  std::optional<double> fp_tol;
  std::optional<ScenarioFile> file;  ///< defaults to installed_scenarios()
};

/// Builds the named benchmark network from `seed` and compares on it; the simulation uses
/// seed + 1. Throws InvalidArgument for an unknown name.
ComparisonReport run_scenario(const std::string& name, std::uint64_t seed,
                              const ScenarioOptions& opts = {});

struct ReplicaRow {
  std::size_t M = 0;
  std::vector<double> rates;  ///< per class
  std::vector<double> gaps;   ///< |rate - beta_rmf| / beta_rmf per class
  double sup_gap = 0.0;
};

struct ReplicaTable {
  RateVector rmf;
  std::vector<ReplicaRow> rows;
};

ReplicaTable run_replica_convergence(const NetworkSpec& spec, const std::vector<std::size_t>& M_list,
                                     const SimConfig& sim_cfg, const SolverConfig& solver_cfg);

/// `neuron,rate_sim,rate_rmf,rate_tmf,err_rmf,err_tmf`
void write_csv(std::ostream& out, const ComparisonReport& report);
/// `method,mean_rel_err,max_rel_err`
void write_summary_csv(std::ostream& out, const ComparisonReport& report);
void write_json(std::ostream& out, const ComparisonReport& report);

/// `M,neuron,rate,rate_rmf,gap`
void write_csv(std::ostream& out, const ReplicaTable& table);
void write_json(std::ostream& out, const ReplicaTable& table);

}  // namespace lgl
