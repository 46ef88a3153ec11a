#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hallmhd/experiments.hpp"
#include "hallmhd/operators.hpp"

using namespace hallmhd;

namespace {

const Grid3 kGrid{16};

SolverConfig quick(double T = 1.0, int steps = 16) {
  SolverConfig c;
  c.T = T;
  c.steps = steps;
  c.tol = 1e-12;
  return c;
}

// (4 pi Gamma((k+1)/2) / (2 (q t)^{(k+1)/2}))^{1/q}, k = 2 - beta q
double decay_closed_form(double p, double beta, double t) {
  const double q = p / (p - 1.0), k = 2.0 - beta * q;
  return std::pow(2.0 * std::numbers::pi * std::tgamma(0.5 * (k + 1.0)) / std::pow(q * t, 0.5 * (k + 1.0)), 1.0 / q);
}

}  // namespace

TEST_CASE("linear decay") {
  for (double p : {4.0, 6.0, 12.0}) {
    CAPTURE(p);
    const ExperimentResult r = decay_experiment(p);
    CHECK(r.pass);
    CHECK(r.target == doctest::Approx(-0.5 * (1.0 - 3.0 / p)).epsilon(1e-14));
    CHECK(std::abs(r.measured - r.target) <= 1e-8);
    CHECK(r.detail("weighted_drift") <= 1e-6);
    CHECK(r.detail("slope_ci_low") <= r.measured);
    for (const auto& row : r.series) CHECK(row[1] == doctest::Approx(decay_closed_form(p, 2.0, row[0])).epsilon(1e-10));
  }
  CHECK(decay_experiment(6.0).target == doctest::Approx(-0.25));

  const ExperimentResult c = decay_experiment(6.0, DecayProfile::custom, 1.0);
  CHECK(c.pass);
  CHECK(c.target == doctest::Approx(-0.75));
  CHECK(c.series[5][1] == doctest::Approx(decay_closed_form(6.0, 1.0, c.series[5][0])).epsilon(1e-10));

  CHECK_THROWS_AS(decay_experiment(3.0), std::invalid_argument);
  CHECK_THROWS_AS(decay_experiment(2.0), std::invalid_argument);
  CHECK_THROWS_AS(decay_experiment(6.0, DecayProfile::custom, 3.0), std::invalid_argument);
}

TEST_CASE("kernel and Beta integral") {
  const ExperimentResult r = kernel_beta_check(6.0);
  CHECK(r.pass);
  CHECK(r.target == doctest::Approx(-0.25));
  CHECK(r.detail("beta_function") == doctest::Approx(std::tgamma(0.25) * std::tgamma(0.5) / std::tgamma(0.75)));
  CHECK(r.detail("beta_relative_error") <= 1e-10);
  CHECK(r.detail("kernel_exponent") == doctest::Approx(-0.75).epsilon(1e-8));
  CHECK(r.detail("kernel_exponent_without_half") == doctest::Approx(-1.0));
  CHECK(r.note.find("-0.75") != std::string::npos);
  CHECK(kernel_beta_check(4.0).pass);
  CHECK(kernel_beta_check(12.0).pass);
  CHECK_THROWS_AS(kernel_beta_check(3.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_beta_check(INFINITY), std::invalid_argument);
}

TEST_CASE("scaling") {
  const SolverConfig c = quick();
  CHECK_THROWS_AS(scaling_experiment(sample_coupled_data(kGrid, 0.05), 1, c), std::invalid_argument);

  const ExperimentResult z = scaling_experiment(StateTriple::zero(kGrid), 2, c);
  CHECK(z.measured == 0.0);

  const ExperimentResult lin = scaling_experiment(sample_coupled_data(kGrid, 0.05), 2, c, true);
  CHECK(lin.pass);
  CHECK(lin.measured <= 1e-12);

  StateTriple ns = sample_coupled_data(kGrid, 0.2);
  ns.B *= 0.0;
  ns.J *= 0.0;
  const ExperimentResult nsr = scaling_experiment(ns, 2, c);
  CHECK(nsr.pass);
  CHECK(nsr.measured <= 1e-10);

  // with a field the mismatch is first order in the amplitude
  const ExperimentResult a = scaling_experiment(sample_coupled_data(kGrid, 0.05), 2, c);
  const ExperimentResult b = scaling_experiment(sample_coupled_data(kGrid, 0.005), 2, c);
  CHECK(a.measured / b.measured == doctest::Approx(10.0).epsilon(0.05));
  CHECK(a.series_header.size() == 4);
  CHECK(a.series.size() == static_cast<std::size_t>(c.steps) + 1);
}

TEST_CASE("smallness scan") {
  const SolverConfig c = quick();
  const StateTriple shape = sample_coupled_data(kGrid, 1.0);
  CHECK_THROWS_AS(smallness_scan(shape, {0.5, 0.5}, c), std::invalid_argument);

  const ScanResult s = smallness_scan(shape, {0.0, 0.1, 1000.0}, c);
  REQUIRE(s.points.size() == 3);
  CHECK(s.points[0].converged);
  CHECK(s.points[0].iterations == 1);
  CHECK(s.points[1].converged);
  CHECK_FALSE(s.points[2].converged);
  CHECK(s.monotone);
  CHECK(s.last_converged == 0.1);
  CHECK(s.first_failed == 1000.0);

  const ExperimentResult e = smallness_experiment(shape, {0.1, 1000.0}, c, {0.5, 1.0});
  CHECK(e.pass);
  CHECK(e.measured == 0.0);
  CHECK(e.detail("coupled_threshold_low_T=0.5") == 0.1);
  CHECK(e.series_header.back() == "coupled_converged_T=1");
}

TEST_CASE("formulation agreement") {
  const StateTriple U = sample_coupled_data(kGrid, 0.3);
  SolverConfig c = quick(0.1, 8);
  c.etd_substeps = 2;
  const ExperimentResult literal = formulation_agreement(U.u, U.B, c);
  CHECK_FALSE(literal.pass);
  CHECK(literal.detail("implied_coefficient") == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(literal.note.find("trajectories differ") == 0);

  c.nonlinear.jgradj_coefficient = 2.0;
  const ExperimentResult fixed = formulation_agreement(U.u, U.B, c);
  CHECK(fixed.pass);
  CHECK(fixed.measured <= 1e-12);
  CHECK(fixed.note.empty());
}

TEST_CASE("solver agreement and summary CSV") {
  SolverConfig c = quick();
  c.etd_substeps = 4;
  const ExperimentResult r = solver_agreement(sample_coupled_data(kGrid, 0.05), c);
  CHECK(r.pass);
  CHECK(r.detail("picard_perturbative") <= 1e-10);

  std::ostringstream os;
  write_summary_csv(os, {r});
  CHECK(os.str().rfind("name,target,measured,tolerance,pass\nsolver_agreement,", 0) == 0);
  CHECK(std::isnan(r.detail("absent")));
}
