#include <array>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hallmhd/experiments.hpp"
#include "hallmhd/mild_solver.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random_fields.hpp"

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

// phi(s) = (0, sin x1, 0) in the u row, constant in time
Trajectory constant_forcing(double T, int steps) {
  StateTriple s = StateTriple::zero(kGrid);
  s.u = to_spectral(sample_vector(kGrid, [](double x, double, double) { return std::array{0.0, std::sin(x), 0.0}; }));
  return Trajectory::uniform(T, steps, s);
}

double forcing_error(Quadrature q, int steps) {
  const Trajectory phi = constant_forcing(1.0, steps);
  const Trajectory K = duhamel_all(phi, q);
  double err = 0.0;
  for (std::size_t m = 0; m < K.size(); ++m) {
    const StateTriple want = (1.0 - std::exp(-phi.times[m])) * phi.states[0];
    err = std::max(err, l2_norm(K.states[m] - want) / l2_norm(phi.states[0]));
  }
  return err;
}

double max_divergence(const Trajectory& t) {
  double m = 0.0;
  for (const auto& s : t.states)
    for (int r = 0; r < 3; ++r) m = std::max(m, divergence_ratio(s[r]));
  return m;
}

double current_gap(const Trajectory& t) {
  double m = 0.0;
  for (const auto& s : t.states)
    if (l2_norm(s.J) > 0.0) m = std::max(m, l2_norm(s.J - curl(s.B)) / l2_norm(s.J));
  return m;
}

}  // namespace

TEST_CASE("solver config") {
  SolverConfig c = quick();
  CHECK_NOTHROW(c.validate(kGrid));
  c.steps = 4;  // (1/4) * 75 > 10
  CHECK_THROWS_AS(c.validate(kGrid), std::invalid_argument);
  c = quick();
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(kGrid), std::invalid_argument);
  c = quick();
  c.etd_order = 3;
  CHECK_THROWS_AS(c.validate(kGrid), std::invalid_argument);
  CHECK(parse_quadrature("left-endpoint") == Quadrature::left_endpoint);
  CHECK_THROWS_AS(parse_quadrature("simpson"), std::invalid_argument);
}

TEST_CASE("duhamel integral") {
  const Trajectory zero = Trajectory::uniform(1.0, 8, StateTriple::zero(kGrid));
  CHECK(sup_norm(duhamel_all(zero)) == 0.0);
  CHECK_THROWS_AS(duhamel_all(Trajectory{}), std::invalid_argument);
  CHECK_THROWS_AS(duhamel_integral(Trajectory{}, 0), std::invalid_argument);
  CHECK_THROWS_AS(duhamel_integral(zero, 9), std::out_of_range);

  // (1 - e^{-t}) sin x1 up to O(h^2) for the trapezoid rule, O(h) for the left endpoint
  const double e16 = forcing_error(Quadrature::trapezoid, 16), e32 = forcing_error(Quadrature::trapezoid, 32);
  CHECK(e16 < 1e-3);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.02));
  const double l16 = forcing_error(Quadrature::left_endpoint, 16), l32 = forcing_error(Quadrature::left_endpoint, 32);
  CHECK(l16 / l32 == doctest::Approx(2.0).epsilon(0.05));

  // recursion equals the direct sum
  Trajectory phi = constant_forcing(0.5, 8);
  for (std::size_t m = 0; m < phi.size(); ++m) phi.states[m] *= 1.0 + m;
  const Trajectory rec = duhamel_all(phi);
  for (std::size_t m = 0; m < phi.size(); ++m)
    CHECK(l2_norm(rec.states[m] - duhamel_integral(phi, m)) <= 1e-14 * l2_norm(rec.states.back()));

  // mean mode integrates exactly for forcing linear in time
  Trajectory mean = Trajectory::uniform(1.0, 4, StateTriple::zero(kGrid));
  for (std::size_t m = 0; m < mean.size(); ++m) mean.states[m].B.set_mode(2, 0, 0, 0, 3.0 * mean.times[m]);
  const Trajectory km = duhamel_all(mean);
  for (std::size_t m = 0; m < km.size(); ++m)
    CHECK(mean_mode(km.states[m].B, 2).real() == doctest::Approx(1.5 * km.times[m] * km.times[m]).epsilon(1e-14));
}

TEST_CASE("zeta") {
  const StateTriple small = sample_coupled_data(kGrid, 0.1);
  const Trajectory U = heat_flow(small, 0.5, 8);
  const Trajectory V = heat_flow(random_coupled_state(kGrid, 3.0, 0.3, 7), 0.5, 8);
  const Trajectory z0 = Trajectory::uniform(0.5, 8, StateTriple::zero(kGrid));
  CHECK(sup_norm(zeta(z0, z0)) == 0.0);

  const Trajectory z = zeta(U, V);
  CHECK(l2_norm(z.states[0]) == 0.0);
  CHECK(sup_norm(z) > 0.0);
  CHECK(max_divergence(z) <= 1e-13);

  Trajectory U2 = U;
  for (auto& s : U2.states) s *= -2.5;
  CHECK(sup_relative_difference(zeta(U2, V), z) == doctest::Approx(3.5).epsilon(1e-12));
  Trajectory lhs = zeta(U2, V);
  for (auto& s : lhs.states) s *= -0.4;
  CHECK(sup_relative_difference(lhs, z) <= 1e-12);

  const Trajectory other = heat_flow(small, 1.0, 8);
  CHECK_THROWS_AS(zeta(U, other), std::invalid_argument);
}

TEST_CASE("picard solve") {
  SUBCASE("zero data") {
    const SolveResult r = picard_solve(StateTriple::zero(kGrid), quick());
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations() == 1);
    CHECK(sup_norm(r.trajectory) == 0.0);
  }
  SUBCASE("small data") {
    const StateTriple U0 = sample_coupled_data(kGrid, 0.05);
    const SolverConfig c = quick();
    const SolveResult r = picard_solve(U0, c);
    REQUIRE(r.trace.converged);
    CHECK(r.trace.residuals.back() <= c.tol);
    CHECK(duhamel_residual(U0, r.trajectory) <= c.tol);
    CHECK(max_divergence(r.trajectory) <= 1e-10);
    CHECK(current_gap(r.trajectory) <= 1e-8);
    // contraction bounded by 4 eta ||e^{t Lap} U0||
    for (std::size_t i = 1; i < r.trace.iterations(); ++i)
      CHECK(r.trace.contraction_estimates[i] <= 4.0 * r.trace.eta_hat * r.trace.data_norm + 0.05);

    SolverConfig e = c;
    e.etd_substeps = 4;
    const Trajectory oracle = etd_timestep_oracle(U0, e);
    CHECK(sup_relative_difference(r.trajectory, oracle) <= 1e-4);

    std::ostringstream os;
    write_trace_csv(os, r.trace);
    CHECK(os.str().rfind("iter,residual,contraction,norm\n1,", 0) == 0);
    CHECK(os.str().find(",nan,") != std::string::npos);
  }
  SUBCASE("data checks") {
    StateTriple bad = sample_coupled_data(kGrid, 0.05);
    bad.J = bad.B;
    CHECK_THROWS_AS(picard_solve(bad, quick()), std::invalid_argument);
    StateTriple rough = StateTriple::zero(kGrid);
    rough.u = grad(to_spectral(sample_scalar(kGrid, [](double x, double, double) { return std::sin(x); })));
    CHECK_THROWS_AS(picard_solve(rough, quick()), std::invalid_argument);
  }
  SUBCASE("large data does not converge") {
    SolverConfig c = quick();
    c.max_iter = 30;
    const SolveResult r = picard_solve(sample_coupled_data(kGrid, 1000.0), c);
    CHECK_FALSE(r.trace.converged);
    CHECK(r.trace.outcome == "diverged");
  }
}

TEST_CASE("coupled iteration") {
  const SolverConfig c = quick();
  SUBCASE("zero data") {
    const SpectralField z(kGrid, Rank::vector3);
    const SolveResult r = coupled_picard_solve(z, z, c);
    CHECK(r.trace.converged);
    CHECK(sup_norm(r.trajectory) == 0.0);
  }
  SUBCASE("no magnetic field reduces to Navier-Stokes") {
    StateTriple U0 = sample_coupled_data(kGrid, 0.2);
    U0.B *= 0.0;
    U0.J *= 0.0;
    const SolveResult a = coupled_picard_solve(U0.u, U0.B, c);
    const SolveResult b = picard_solve(U0, c);
    CHECK(sup_relative_difference(a.trajectory, b.trajectory) <= 1e-12);
  }
  SUBCASE("split operators equal the Omega rows") {
    const StateTriple U = sample_coupled_data(kGrid, 0.3);
    const CoupledRhs r = coupled_rhs(U.u, U.B);
    const StateTriple w = omega(U, U);
    CHECK(relative_difference(r.du, w.u) <= 1e-13);
    CHECK(relative_difference(r.dB, w.B) <= 1e-13);
  }
  SUBCASE("small data") {
    const StateTriple U0 = sample_coupled_data(kGrid, 0.05);
    const SolveResult r = coupled_picard_solve(U0.u, U0.B, c);
    REQUIRE(r.trace.converged);
    for (double n : r.trace.norms) CHECK(n < 2.0 * r.trace.data_norm);
    CHECK(coupled_duhamel_residual(U0.u, U0.B, r.trajectory) <= c.tol);
    CHECK(current_gap(r.trajectory) <= 1e-8);
    CHECK(max_divergence(r.trajectory) <= 1e-10);
    // same fixed point as the three-row system on consistent data
    CHECK(sup_relative_difference(r.trajectory, picard_solve(U0, c).trajectory) <= 1e-10);
  }
}

TEST_CASE("perturbative solve") {
  const SolverConfig c = quick();
  const SolveResult z = perturbative_solve(StateTriple::zero(kGrid), c);
  CHECK(z.trace.converged);
  CHECK(sup_norm(z.trajectory) == 0.0);

  const StateTriple U0 = sample_coupled_data(kGrid, 0.05);
  const SolveResult w = perturbative_solve(U0, c);
  REQUIRE(w.trace.converged);
  CHECK(w.trace.final_T == c.T);
  CHECK(w.trace.lambda_hat < 1.0);
  CHECK(sup_relative_difference(w.trajectory, picard_solve(U0, c).trajectory) <= 1e-10);

  // moderate data: Picard fails on [0, 2], the split converges after halving T
  SolverConfig m = quick(2.0, 32);
  m.tol = 1e-10;
  const StateTriple big = sample_coupled_data(kGrid, 3.0);
  CHECK_FALSE(picard_solve(big, m).trace.converged);
  const SolveResult pw = perturbative_solve(big, m);
  CHECK(pw.trace.converged);
  CHECK(pw.trace.final_T < m.T);
  CHECK(duhamel_residual(big, pw.trajectory) <= 1e-9);
}

TEST_CASE("ETD oracle") {
  const SolverConfig c = quick(0.5, 8);
  CHECK(sup_norm(etd_timestep_oracle(StateTriple::zero(kGrid), c)) == 0.0);

  const StateTriple U0 = sample_coupled_data(kGrid, 0.2);
  const Trajectory lin = etd_timestep_oracle(U0, c, [](const StateTriple& s) { return 0.0 * s; });
  CHECK(sup_relative_difference(lin, heat_flow(U0, c.T, c.steps)) <= 1e-15);

  for (int order : {1, 2}) {
    SolverConfig a = c;
    a.etd_order = order;
    a.etd_substeps = 2;
    const Trajectory t2 = etd_timestep_oracle(U0, a);
    a.etd_substeps = 4;
    const Trajectory t4 = etd_timestep_oracle(U0, a);
    a.etd_substeps = 8;
    const Trajectory t8 = etd_timestep_oracle(U0, a);
    const double ratio = sup_norm(difference(t2, t4)) / sup_norm(difference(t4, t8));
    CHECK(ratio == doctest::Approx(order == 1 ? 2.0 : 4.0).epsilon(0.15));
  }
}

TEST_CASE("abstract fixed point") {
  AbstractParameters p;
  p.eta = 1.0;
  p.y = 0.1;
  AbstractResult r = abstract_fixed_point(FixedPointMode::plain, p);
  REQUIRE(r.trace.converged);
  CHECK(std::abs(r.solution[0] - (1.0 - std::sqrt(0.6)) / 2.0) <= 1e-15);
  CHECK(std::abs(r.solution[0] - 0.1127016654) <= 1e-10);
  CHECK(r.hypothesis_holds);
  CHECK(r.in_ball);
  CHECK(r.ball_radius == doctest::Approx(0.2));

  p.y = 0.0;
  r = abstract_fixed_point(FixedPointMode::plain, p);
  CHECK(r.solution[0] == 0.0);

  p.y = 1.0;
  r = abstract_fixed_point(FixedPointMode::plain, p);
  CHECK_FALSE(r.hypothesis_holds);
  CHECK_FALSE(r.trace.converged);
  CHECK(r.trace.outcome == "diverged");

  AbstractParameters q;
  q.lambda = 0.5;
  q.gamma = 1.0;
  q.y = 0.06;
  r = abstract_fixed_point(FixedPointMode::linear_bilinear, q);
  REQUIRE(r.trace.converged);
  CHECK(std::abs(r.solution[0] - 0.2) <= 1e-10);
  CHECK(r.hypothesis_holds);
  CHECK(r.hypothesis_bound == doctest::Approx(0.0625));
  CHECK(r.in_ball);

  AbstractParameters cp;
  cp.eta = 1.0;
  cp.T = 1.0;
  cp.x0 = 0.01;
  cp.y0 = 0.004;  // 0.01 + 3 * 0.004 = 0.022 < 1/24
  r = abstract_fixed_point(FixedPointMode::coupled, cp);
  REQUIRE(r.trace.converged);
  CHECK(r.hypothesis_holds);
  CHECK(r.in_ball);
  const double x = r.solution[0], y = r.solution[1];
  CHECK(std::abs(x - (cp.x0 + x * x + 2.0 * y * y)) <= 1e-15);
  CHECK(std::abs(y - (cp.y0 + x * y + y * y)) <= 1e-15);
  CHECK(parse_fixed_point_mode("linear-bilinear") == FixedPointMode::linear_bilinear);
  CHECK_THROWS_AS(parse_fixed_point_mode("banach"), std::invalid_argument);
}
