#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "lgl/error.hpp"
#include "lgl/rmf_solver.hpp"
#include "lgl/tmf_solver.hpp"

using namespace lgl;

namespace {

SolverConfig tight() {
  SolverConfig cfg;
  cfg.fp_tol = 1e-13;
  cfg.max_iter = 500;
  return cfg;
}

double sup_rel_gap(const RateVector& a, const RateVector& b) {
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::fabs(a[i] - b[i]));
    scale = std::max(scale, std::fabs(b[i]));
  }
  return gap / scale;
}

}  // namespace

TEST_CASE("drive levels") {
  NetworkSpec spec = make_uniform(3, 2.0, 1.0, 0.5);
  spec.synapses = {{0, 1, 0.5}, {0, 2, 0.25}};
  const TmfState st = tmf_state(spec, RateVector({1.0, 2.0, 4.0}));
  CHECK(st.s[0] == doctest::Approx(1.0 + 2.0 * (0.5 * 2.0 + 0.25 * 4.0)));
  CHECK(st.s[1] == 1.0);
  spec.tau[0] = kInfiniteTau;
  spec.r[0] = 1.0;
  CHECK(std::isinf(tmf_state(spec, RateVector({1.0, 2.0, 4.0})).s[0]));
}

TEST_CASE("uncoupled neurons") {
  CHECK(tmf_rhs(make_uniform(2, 1.0, 1.5, 1.5), RateVector({1.0, 1.0}), SolverConfig{})[0] ==
        doctest::Approx(1.5).epsilon(1e-15));
  // With no input the drive is exact, so the rate is the renewal rate of the lone neuron.
  const double tau = 2.0, b = 3.0, r = 0.5;
  boost::math::quadrature::exp_sinh<double> integrator;
  const double mean = integrator.integrate(
      [&](double t) { return std::exp(-b * t + (b - r) * tau * -std::expm1(-t / tau)); });
  CHECK(tmf_rhs(make_uniform(1, tau, b, r), RateVector({1.0}), SolverConfig{})[0] ==
        doctest::Approx(1.0 / mean).epsilon(1e-10));
  const SolveReport rep = solve_tmf(make_uniform(4, kInfiniteTau, 2.0, 2.0), SolverConfig{});
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
}

TEST_CASE("finite-tau rate against the incomplete-gamma expression") {
  NetworkSpec spec = make_uniform(2, 1.3, 1.2, 0.4);
  spec.synapses = {{0, 1, 0.9}};
  const double beta1 = 2.2;
  const double s = 1.2 + 1.3 * 0.9 * beta1;
  const double a = 1.3 * s, x = (s - 0.4) * 1.3;
  const double lower = boost::math::tgamma_lower(a, x);
  const double want = 1.0 / (1.3 * std::exp(x) * lower / std::pow(x, a));
  CHECK(tmf_rhs(spec, RateVector({1.0, beta1}), SolverConfig{})[0] ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("counting-synapse branch is the Gaussian-tail integral") {
  NetworkSpec spec = make_uniform(2, kInfiniteTau, 1.0, 1.0);
  spec.synapses = {{0, 1, 2.0}};
  // r = 1, alpha = 2: 1/beta = int_0^inf e^{-t - t^2} dt.
  CHECK(tmf_rhs(spec, RateVector({1.0, 1.0}), SolverConfig{})[0] ==
        doctest::Approx(1.0 / 0.5456413607650470421).epsilon(1e-12));
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double alpha : {1e-6, 0.1, 7.0, 1e4}) {
    const double want = 1.0 / integrator.integrate([&](double t) { return std::exp(-t - alpha * t * t / 2); });
    CHECK(tmf_rhs(spec, RateVector({1.0, alpha / 2.0}), SolverConfig{})[0] ==
          doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("stationary density") {
  const NetworkSpec net = gen_random_recurrent(6, 3, 1.0, 1.0, 1.0, 17);
  const SolveReport rep = solve_tmf(net, tight());
  REQUIRE(rep.converged);
  const TmfState st = tmf_state(net, rep.beta);
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (std::size_t i = 0; i < net.K; ++i) {
    const double r = net.r[i], s = st.s[i];
    auto p = [&](double lam) { return tmf_density(net, rep.beta, i, lam); };
    CHECK(p(r - 0.1) == 0.0);
    CHECK(p(s + 0.1) == 0.0);
    for (double lam = r; lam < s; lam += (s - r) / 37) CHECK(p(lam) >= 0.0);
    const double mass = integrator.integrate(p, r, s);
    const double mean = integrator.integrate([&](double lam) { return lam * p(lam); }, r, s);
    CHECK(std::fabs(mass - 1.0) < 1e-8);
    CHECK(std::fabs(mean - rep.beta[i]) < 1e-6);
    // MGF against the density.
    const double u = -0.3;
    const double mgf = integrator.integrate([&](double lam) { return std::exp(u * lam) * p(lam); }, r, s);
    CHECK(std::fabs(tmf_mgf(net, rep.beta, i, u) - mgf) < 1e-8);
    CHECK(tmf_mgf(net, rep.beta, i, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tmf_ode_residual(net, rep.beta, i, -0.2) < 1e-6);
  }
  CHECK_THROWS_AS(tmf_mgf(net, rep.beta, 0, -1.0), InvalidArgument);
}

TEST_CASE("degenerate and unsupported densities") {
  const NetworkSpec quiet = make_uniform(2, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(tmf_density(quiet, RateVector({1.0, 1.0}), 0, 1.0), DegenerateDistribution);
  NetworkSpec counting = make_complete(2, kInfiniteTau, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(tmf_density(counting, RateVector({1.0, 1.0}), 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(tmf_rhs(quiet, RateVector({1.0}), SolverConfig{}), InvalidArgument);
}

TEST_CASE("weak coupling: both mean-field rates coincide") {
  const NetworkSpec net = make_complete(10, 1.0, 1.0, 1.0, 0.01);
  const RateVector beta(std::vector<double>(10, 1.05));
  const RateVector t = tmf_rhs(net, beta, SolverConfig{});
  const RateVector r = rmf_rhs(net, beta, SolverConfig{});
  for (std::size_t i = 0; i < 10; ++i) CHECK(t[i] == doctest::Approx(r[i]).epsilon(1e-3));
}

TEST_CASE("gap between the two limits shrinks with the weight scale") {
  const NetworkSpec base = gen_random_recurrent(8, 4, 1.0, 1.0, 1.0, 3);
  double prev = std::numeric_limits<double>::infinity();
  for (double scale : {2.0, 1.0, 0.3, 0.1, 0.03, 0.01}) {
    NetworkSpec net = base;
    for (Synapse& s : net.synapses) s.weight *= scale;
    const double gap = sup_rel_gap(solve_tmf(net, tight()).beta, solve_rmf(net, tight()).beta);
    CAPTURE(scale);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("strong sparse coupling separates the limits") {
  const NetworkSpec net = gen_random_recurrent(20, 2, 5.0, 1.0, kInfiniteTau, 5);
  const SolveReport t = solve_tmf(net, tight());
  const SolveReport r = solve_rmf(net, tight());
  CHECK(t.converged);
  CHECK(r.converged);
  CHECK(sup_rel_gap(t.beta, r.beta) > 0.05);
}
