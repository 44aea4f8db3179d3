#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "lgl/error.hpp"
#include "lgl/rmf_solver.hpp"
#include "lgl/transfer.hpp"

using namespace lgl;

namespace {

// Output rate from the finite-interval representation on (0, tau), evaluated by nested
// tanh-sinh quadrature; independent of the smooth form used by the library.
double finite_interval_rate(const TransferQuery& q) {
  const double tau = q.tau;
  boost::math::quadrature::tanh_sinh<double> inner, outer;
  auto integrand = [&](double v) {
    const double w = 1.0 - v / tau;
    if (w <= 0.0) return 0.0;
    double exponent = -q.b * (-v - tau * std::log(w)) - q.r * v;
    for (const Input& in : q.inputs) {
      const double decay =
          v == 0.0 ? 0.0
                   : inner.integrate([&](double u) { return std::exp(-in.weight * u) / (1.0 - u / tau); },
                                     0.0, v);
      exponent -= in.rate * (-tau * std::log(w) - decay);
    }
    return std::exp(exponent) / w;
  };
  return 1.0 / outer.integrate(integrand, 0.0, tau);
}

}  // namespace

TEST_CASE("constant intensity") {
  CHECK(transfer_eval({1.0, 1.0, 1.0, {}}, SolverConfig{}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(transfer_eval({kInfiniteTau, 2.0, 2.0, {}}, SolverConfig{}) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("same value as the network rate equation with pinned sources") {
  NetworkSpec spec = make_uniform(3, 1.0, 1.0, 1.0);
  spec.synapses = {{0, 1, 1.0}, {0, 2, 1.0}};
  const double via_network = rmf_rhs(spec, RateVector({1.0, 1.0, 1.0}), SolverConfig{})[0];
  const double direct = transfer_eval({1.0, 1.0, 1.0, {{1.0, 1.0}, {1.0, 1.0}}}, SolverConfig{});
  CHECK(std::fabs(direct - via_network) <= 1e-10 * direct);
}

TEST_CASE("smooth and finite-interval forms agree") {
  const std::vector<TransferQuery> queries{
      {1.0, 1.0, 1.0, {{1.0, 1.0}, {1.0, 1.0}}},
      {2.0, 1.5, 0.7, {{1.3, 0.8}, {0.4, 2.5}}},
      {0.5, 3.0, 1.0, {{5.0, 0.2}}},
  };
  for (const TransferQuery& q : queries) {
    CHECK(transfer_eval(q, SolverConfig{}) == doctest::Approx(finite_interval_rate(q)).epsilon(1e-8));
  }
}

TEST_CASE("monotone in every input rate") {
  const TransferQuery q{1.5, 1.0, 0.5, {{1.0, 0.5}, {2.0, 3.0}}};
  const double base = transfer_eval(q, SolverConfig{});
  for (std::size_t j = 0; j < q.inputs.size(); ++j) {
    TransferQuery up = q;
    up.inputs[j].rate *= 1.01;
    CHECK(transfer_eval(up, SolverConfig{}) > base);
  }
}

TEST_CASE("square-root asymptote") {
  CHECK(sqrt_asymptote({1.0, 1.0, 1.0, {{std::numbers::pi / 2, 1.0}}}) == doctest::Approx(1.0));
  const TransferQuery q{1.0, 1.0, 1.0, {{3.0, 0.5}, {1.0, 2.0}}};
  TransferQuery twice = q;
  for (Input& in : twice.inputs) in.rate *= 2.0;
  CHECK(sqrt_asymptote(twice) == doctest::Approx(std::sqrt(2.0) * sqrt_asymptote(q)));
  CHECK_THROWS_AS(sqrt_asymptote({1.0, 1.0, 1.0, {{1.0, 0.0}}}), InvalidArgument);

  const TransferQuery big{1.0, 1.0, 1.0, {{1e4, 1.0}, {1e4, 1.0}}};
  const double ratio = transfer_eval(big, SolverConfig{}) / sqrt_asymptote(big);
  CHECK(ratio > 0.9);
  CHECK(ratio < 1.1);
}

TEST_CASE("growth is sublinear at large rates") {
  for (double k : {4.0, 16.0}) {
    TransferQuery q{1.0, 1.0, 1.0, {{500.0, 1.0}, {500.0, 0.5}}};
    const double f = transfer_eval(q, SolverConfig{});
    for (Input& in : q.inputs) in.rate *= k;
    CHECK(transfer_eval(q, SolverConfig{}) / f <= std::sqrt(k) * 1.01);
  }
}

TEST_CASE("saturation bound") {
  CHECK(saturation_bound({1.0, 1.0, 1.0, {{1.0, 5.0}, {1.0, 5.0}}}).beta_bar == 3.0);
  CHECK(saturation_bound({1.0, 2.0, 2.0, {}}).beta_bar == 2.0);
  CHECK(saturation_bound({kInfiniteTau, 1.0, 1.0, {{2.0, 1.0}}}).beta_bar == 3.0);
  CHECK_FALSE(saturation_bound({1.0, 1.0, 1.0, {{1.0, 0.0}}}).corrected.has_value());
  CHECK(*saturation_bound({1.0, 1.0, 1.0, {{1.0, 4.0}}}).corrected == doctest::Approx(2.0 * 0.75));

  // Reset below base: e^{-a} A^B / (tau gamma(B, a)).
  const double tau = 1.5, b = 2.0, r = 0.5;
  const TransferQuery q{tau, b, r, {{1.0, 10.0}, {0.5, 10.0}}};
  const double a = tau * (b - r), B = tau * (b + 1.5);
  const double want = std::exp(-a) * std::pow(a, B) / (tau * boost::math::tgamma_lower(B, a));
  CHECK(saturation_bound(q).beta_bar == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("large weights approach the bound from below") {
  for (double tau : {0.5, 1.0, 2.0}) {
    for (double mu : {100.0, 1e3, 1e4}) {
      for (double beta : {0.5, 1.0, 3.0}) {
        const TransferQuery q{tau, 1.0, 1.0, {{beta, mu}, {beta, mu}}};
        const double f = transfer_eval(q, SolverConfig{});
        CAPTURE(tau);
        CAPTURE(mu);
        CAPTURE(beta);
        CHECK(f <= saturation_bound(q).beta_bar * 1.01);
      }
    }
  }
  const TransferQuery q{1.0, 1.0, 1.0, {{1.0, 1e4}, {1.0, 1e4}}};
  const SaturationBound sb = saturation_bound(q);
  CHECK(sb.beta_bar == 3.0);
  CHECK(transfer_eval(q, SolverConfig{}) == doctest::Approx(*sb.corrected).epsilon(0.05));
}

TEST_CASE("sweeps") {
  const TransferQuery q{1.0, 1.0, 1.0, {{1.0, 1.0}, {1.0, 1.0}}};
  const std::vector<double> values{0.0, 1.0, 10.0};
  const auto rows = transfer_sweep(q, SweepKind::Weight, values, SolverConfig{});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].F == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(rows[0].asymptote.has_value());
  CHECK_FALSE(rows[0].corrected.has_value());
  CHECK(rows[2].F > rows[1].F);
  std::ostringstream out;
  write_csv(out, rows);
  CHECK(out.str().rfind("sweep_value,F,sqrt_asymptote,beta_bar,corrected\n0,1,,3,\n", 0) == 0);
}
