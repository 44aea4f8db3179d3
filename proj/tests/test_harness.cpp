#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lgl/error.hpp"
#include "lgl/harness.hpp"

using namespace lgl;

namespace {

SimConfig sim(std::uint64_t events, std::uint64_t seed) {
  SimConfig cfg;
  cfg.max_events = events;
  cfg.seed = seed;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("uncoupled network: errors are sampling noise") {
  const NetworkSpec spec = make_complete(6, kInfiniteTau, 1.0, 1.0, 0.0);
  const ComparisonReport rep = run_comparison(spec, sim(200'000, 4), SolverConfig{});
  CHECK(rep.rmf_converged);
  CHECK(rep.tmf_converged);
  CHECK(rep.mean_rel_stderr > 0.0);
  CHECK(rep.rmf.mean_rel_err <= 3.0 * rep.mean_rel_stderr);
  CHECK(rep.tmf.mean_rel_err <= 3.0 * rep.mean_rel_stderr);
}

TEST_CASE("aggregates skip the driving layer and are recomputable") {
  const NetworkSpec spec = gen_feedforward(3, 5, 2, 1.0, 1.0, kInfiniteTau, 6);
  const ComparisonReport rep = run_comparison(spec, sim(50'000, 2), SolverConfig{});
  REQUIRE(rep.rows.size() == 15);
  double sum = 0.0, worst = 0.0;
  for (const ComparisonRow& row : rep.rows) {
    CHECK(row.driving == (row.neuron < 5));
    CHECK(row.err_rmf == doctest::Approx(std::fabs(row.rate_rmf - row.rate_sim) / row.rate_sim));
    CHECK(row.err_tmf >= 0.0);
    if (row.driving) continue;
    sum += row.err_rmf;
    worst = std::max(worst, row.err_rmf);
  }
  CHECK(rep.rmf.mean_rel_err == doctest::Approx(sum / 10.0));
  CHECK(rep.rmf.max_rel_err == worst);
  CHECK(rep.spec_hash == spec_hash(spec));
}

TEST_CASE("identical invocations give identical output") {
  auto render = [] {
    ScenarioOptions opts;
    opts.events = 20'000;
    const ComparisonReport rep = run_scenario("sparse-recurrent", 3, opts);
    std::ostringstream out;
    write_csv(out, rep);
    write_summary_csv(out, rep);
    write_json(out, rep);
    return out.str();
  };
  CHECK(render() == render());
}

TEST_CASE("scenario configuration") {
  const ScenarioFile installed = load_scenarios(slurp(LGL_SCENARIO_CONFIG));
  const ScenarioFile builtin = default_scenarios();
  REQUIRE(installed.scenarios.size() == builtin.scenarios.size());
  CHECK(installed.events == builtin.events);
  CHECK(installed.max_iter == builtin.max_iter);
  CHECK(installed.fp_tol == builtin.fp_tol);
  for (std::size_t k = 0; k < builtin.scenarios.size(); ++k) {
    const ScenarioConfig& a = installed.scenarios[k];
    const ScenarioConfig& b = builtin.scenarios[k];
    CHECK(a.name == b.name);
    CHECK(a.topology == b.topology);
    CHECK(a.K == b.K);
    CHECK(a.layers == b.layers);
    CHECK(a.width == b.width);
    CHECK(a.in_degree == b.in_degree);
    CHECK(a.weight_max == b.weight_max);
    CHECK(a.base == b.base);
    CHECK(a.tau == b.tau);
  }
  CHECK_THROWS_AS(load_scenarios("{"), FormatError);
  CHECK_THROWS_AS(load_scenarios(R"({"version": 2, "scenarios": []})"), FormatError);
  CHECK_THROWS_AS(load_scenarios(R"({"version": 1, "scenarios": [{"name": "x", "topology": "ring"}]})"),
                  FormatError);
  CHECK_THROWS_AS(run_scenario("complete-ring", 1), InvalidArgument);
}

TEST_CASE("scenario topologies") {
  const ScenarioFile f = default_scenarios();
  const NetworkSpec dense = build_scenario(f.scenarios[0], 1);
  CHECK(dense.K == 100);
  CHECK(dense.synapses.size() == 100 * 50);
  const NetworkSpec ff = build_scenario(f.scenarios[3], 1);
  CHECK(ff.K == 400);
  CHECK(ff.synapses.size() == 9 * 40 * 3);
}

TEST_CASE("sparse feedforward: the replica limit wins") {
  ScenarioOptions opts;
  opts.events = 1'000'000;
  const ComparisonReport rep = run_scenario("sparse-feedforward", 1, opts);
  CHECK(rep.rmf_converged);
  CHECK(rep.tmf_converged);
  CHECK(rep.tmf.mean_rel_err >= 2.0 * rep.rmf.mean_rel_err);
}

TEST_CASE("replica convergence table") {
  const NetworkSpec quiet = make_complete(3, kInfiniteTau, 1.0, 1.0, 0.0);
  const ReplicaTable t = run_replica_convergence(quiet, {2, 5}, sim(100'000, 3), SolverConfig{});
  REQUIRE(t.rows.size() == 2);
  for (const ReplicaRow& row : t.rows) {
    CHECK(row.gaps.size() == 3);
    for (double g : row.gaps) {
      CHECK(g >= 0.0);
      CHECK(g < 0.03);
    }
  }
  CHECK_THROWS_AS(run_replica_convergence(quiet, {1}, sim(1000, 1), SolverConfig{}), InvalidArgument);
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str().rfind("M,neuron,rate,rate_rmf,gap\n2,0,", 0) == 0);
}

TEST_CASE("report formats") {
  const NetworkSpec spec = make_complete(3, 1.0, 1.0, 1.0, 0.5);
  ComparisonReport rep = run_comparison(spec, sim(10'000, 1), SolverConfig{});
  std::ostringstream csv, summary, json;
  write_csv(csv, rep);
  write_summary_csv(summary, rep);
  write_json(json, rep);
  CHECK(csv.str().rfind("neuron,rate_sim,rate_rmf,rate_tmf,err_rmf,err_tmf\n", 0) == 0);
  CHECK(summary.str().rfind("method,mean_rel_err,max_rel_err\nrmf,", 0) == 0);
  const auto doc = nlohmann::json::parse(json.str());
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["sim"]["seed"] == 1);
  CHECK(doc["spec_hash"] == spec_hash(spec));
}
