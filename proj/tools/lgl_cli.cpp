#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lgl/error.hpp"
#include "lgl/harness.hpp"
#include "lgl/model.hpp"
#include "lgl/rmf_solver.hpp"
#include "lgl/simulator.hpp"
#include "lgl/tmf_solver.hpp"
#include "lgl/transfer.hpp"

namespace {

using nlohmann::json;

struct Common {
  std::string spec_path;
  std::uint64_t seed = 1;
  std::uint64_t events = 1'000'000;
  int max_iter = 20;
  double fp_tol = 1e-10;
  std::string out;
  std::string format = "csv";
};

lgl::NetworkSpec read_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lgl::FormatError("cannot open network file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return lgl::load(buf.str());
}

// Runs `emit` against the --out file, or stdout when none was given.
template <class F>
void with_output(const std::string& path, F&& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw lgl::FormatError("cannot write " + path);
  emit(out);
}

lgl::SolverConfig solver_config(const Common& c) {
  lgl::SolverConfig cfg;
  cfg.max_iter = c.max_iter;
  cfg.fp_tol = c.fp_tol;
  return cfg;
}

lgl::SimConfig sim_config(const Common& c) {
  lgl::SimConfig cfg;
  cfg.seed = c.seed;
  cfg.max_events = c.events;
  return cfg;
}

void write_json(std::ostream& out, const lgl::SimResult& r) {
  json doc = {{"rates", r.rates},
              {"rate_stderr", r.rate_stderr},
              {"spikes", r.spike_counts},
              {"elapsed_time", r.elapsed_time},
              {"isi_mean", r.isi_mean},
              {"isi_variance", r.isi_variance},
              {"candidates", r.candidates}};
  out << doc.dump(2) << '\n';
}

void write_json(std::ostream& out, const lgl::SolveReport& r) {
  json doc = {{"beta", std::vector<double>(r.beta.begin(), r.beta.end())},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"final_residual", r.final_residual},
              {"change", r.change}};
  if (r.residual_ode) doc["residual_ode"] = *r.residual_ode;
  out << doc.dump(2) << '\n';
}

template <class T>
void emit(const Common& c, const T& value) {
  with_output(c.out, [&](std::ostream& os) {
    if (c.format == "json") {
      write_json(os, value);
    } else {
      write_csv(os, value);
    }
  });
}

void emit_comparison(const Common& c, const lgl::ComparisonReport& report) {
  emit(c, report);
  if (c.out.empty()) {
    lgl::write_summary_csv(std::cerr, report);
  } else {
    with_output(c.out + ".summary.csv",
                [&](std::ostream& os) { lgl::write_summary_csv(os, report); });
  }
  if (!report.rmf_converged) std::cerr << "warning: RMF iteration did not converge\n";
  if (!report.tmf_converged) std::cerr << "warning: TMF iteration did not converge\n";
}

void add_common(CLI::App* cmd, Common& c, bool spec, bool sim, bool solve) {
  if (spec) cmd->add_option("--spec", c.spec_path, "network JSON document")->required();
  cmd->add_option("--seed", c.seed, "random seed");
  if (sim) cmd->add_option("--events", c.events, "spikes to simulate, burn-in included");
  if (solve) {
    cmd->add_option("--max-iter", c.max_iter, "fixed-point iterations");
    cmd->add_option("--fp-tol", c.fp_tol, "relative change that stops the iteration");
  }
  cmd->add_option("--out", c.out, "output path (stdout when omitted)");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear Galves-Loecherbach networks: simulation and mean-field rates"};
  app.require_subcommand(1);
  Common c;

  // generate
  std::string topology = "recurrent";
  std::size_t K = 100, layers = 10, width = 40, in_degree = 5;
  double weight_max = 1.0, base = 1.0;
  std::string tau_text = "inf";
  auto* gen = app.add_subcommand("generate", "emit a random network document");
  gen->add_option("--topology", topology)->check(CLI::IsMember({"recurrent", "feedforward"}));
  gen->add_option("--K", K, "neurons (recurrent)");
  gen->add_option("--layers", layers, "layers (feedforward)");
  gen->add_option("--width", width, "neurons per layer (feedforward)");
  gen->add_option("--in-degree", in_degree, "presynaptic partners per neuron");
  gen->add_option("--weight-max", weight_max, "weights are uniform on (0, weight-max]");
  gen->add_option("--base", base, "base rate, also the reset value");
  gen->add_option("--tau", tau_text, "relaxation time, or inf for counting synapses");
  gen->add_option("--seed", c.seed, "random seed");
  gen->add_option("--out", c.out, "output path (stdout when omitted)");

  auto* sim = app.add_subcommand("simulate", "exact event-driven simulation");
  add_common(sim, c, true, true, false);
  auto* rmf = app.add_subcommand("solve-rmf", "replica-mean-field rates");
  add_common(rmf, c, true, false, true);
  bool ode = false;
  rmf->add_flag("--ode-residual", ode, "report the ODE residual per neuron (json only)");
  auto* tmf = app.add_subcommand("solve-tmf", "thermodynamic-mean-field rates");
  add_common(tmf, c, true, false, true);
  auto* cmp = app.add_subcommand("compare", "simulation against both mean-field solutions");
  add_common(cmp, c, true, true, true);

  std::string scenario_name;
  auto* scn = app.add_subcommand("scenario", "run a named benchmark comparison");
  scn->add_option("name", scenario_name, "dense-recurrent | sparse-recurrent | "
                                         "dense-feedforward | sparse-feedforward")
      ->required();
  add_common(scn, c, false, true, true);

  std::vector<std::size_t> replicas{2, 10, 100};
  auto* rep = app.add_subcommand("replica", "replica simulations against the RMF rates");
  add_common(rep, c, true, true, true);
  rep->add_option("--M", replicas, "replica counts")->delimiter(',');

  std::string t_tau = "1";
  double t_b = 1.0, t_r = 1.0;
  std::vector<double> rates{1.0, 1.0}, weights{1.0, 1.0}, values;
  std::string sweep = "rate";
  auto* tr = app.add_subcommand("transfer", "transfer-function sweep of a single neuron");
  tr->add_option("--tau", t_tau, "relaxation time, or inf");
  tr->add_option("--b", t_b, "base rate");
  tr->add_option("--r", t_r, "reset value");
  tr->add_option("--rates", rates, "input rates")->delimiter(',');
  tr->add_option("--weights", weights, "input weights")->delimiter(',');
  tr->add_option("--sweep", sweep, "quantity set to each value")
      ->check(CLI::IsMember({"rate", "weight"}));
  tr->add_option("--values", values, "sweep values")->delimiter(',')->required();
  tr->add_option("--out", c.out, "output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    auto parse_tau = [](const std::string& s) {
      return s == "inf" ? lgl::kInfiniteTau : std::stod(s);
    };
    if (*gen) {
      const double tau = parse_tau(tau_text);
      const lgl::NetworkSpec spec =
          topology == "recurrent"
              ? lgl::gen_random_recurrent(K, in_degree, weight_max, base, tau, c.seed)
              : lgl::gen_feedforward(layers, width, in_degree, weight_max, base, tau, c.seed);
      with_output(c.out, [&](std::ostream& os) { os << lgl::save(spec) << '\n'; });
    } else if (*sim) {
      emit(c, lgl::simulate_lgl(read_spec(c.spec_path), sim_config(c)));
    } else if (*rmf) {
      lgl::SolverConfig cfg = solver_config(c);
      cfg.ode_diagnostic = ode;
      const auto report = lgl::solve_rmf(read_spec(c.spec_path), cfg);
      emit(c, report);
      if (!report.converged) std::cerr << "warning: iteration did not converge\n";
    } else if (*tmf) {
      const auto report = lgl::solve_tmf(read_spec(c.spec_path), solver_config(c));
      emit(c, report);
      if (!report.converged) std::cerr << "warning: iteration did not converge\n";
    } else if (*cmp) {
      emit_comparison(c, lgl::run_comparison(read_spec(c.spec_path), sim_config(c),
                                             solver_config(c)));
    } else if (*scn) {
      lgl::ScenarioOptions opts;
      if (scn->count("--events")) opts.events = c.events;
      if (scn->count("--max-iter")) opts.max_iter = c.max_iter;
      if (scn->count("--fp-tol")) opts.fp_tol = c.fp_tol;
      emit_comparison(c, lgl::run_scenario(scenario_name, c.seed, opts));
    } else if (*rep) {
      emit(c, lgl::run_replica_convergence(read_spec(c.spec_path), replicas, sim_config(c),
                                           solver_config(c)));
    } else if (*tr) {
      if (rates.size() != weights.size()) {
        throw lgl::InvalidArgument("--rates and --weights need the same length");
      }
      lgl::TransferQuery q{parse_tau(t_tau), t_b, t_r, {}};
      for (std::size_t k = 0; k < rates.size(); ++k) q.inputs.push_back({rates[k], weights[k]});
      const auto rows =
          lgl::transfer_sweep(q, sweep == "rate" ? lgl::SweepKind::Rate : lgl::SweepKind::Weight,
                              values, lgl::SolverConfig{});
      with_output(c.out, [&](std::ostream& os) { lgl::write_csv(os, rows); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
