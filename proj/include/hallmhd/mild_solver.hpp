#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hallmhd/field.hpp"
#include "hallmhd/nonlinearity.hpp"

namespace hallmhd {

enum class Quadrature { trapezoid, left_endpoint };

Quadrature parse_quadrature(const std::string& name);
std::string to_string(Quadrature q);

struct SolverConfig {
  double T = 1.0;
  int steps = 32;
  int max_iter = 60;
  double tol = 1e-10;  // relative, sup over the time grid
  Quadrature quadrature = Quadrature::trapezoid;
  int etd_order = 2;     // 1 or 2
  int etd_substeps = 1;  // oracle steps per stored interval
  bool check_data = true;  // reject data that is not divergence-free or has J != curl B
  NonlinearOptions nonlinear;

  /// Throws std::invalid_argument on nonpositive T, steps, max_iter or tol, on a bad
  /// ETD order, or when (T / steps) |xi_max|^2 > 10 on `grid`.
  void validate(const Grid3& grid) const;
};

/// Largest heat stiffness allowed per stored time step.
inline constexpr double kMaxStepStiffness = 10.0;

struct IterationTrace {
  std::vector<double> residuals;              // relative update per iteration
  std::vector<double> contraction_estimates;  // residual ratios (NaN for the first)
  std::vector<double> norms;                  // iterate norms
  bool converged = false;
  std::string outcome;  // "converged", "max_iter", "diverged", "shrink T", ...

  // Empirical constants observed along the run.
  double eta_hat = 0.0;     // bilinear norm estimate of the iteration map
  double lambda_hat = 0.0;  // linear part (perturbative solver)
  double data_norm = 0.0;   // norm of the free term (heat flow of the data)
  double final_T = 0.0;

  void record(double residual, double norm);
  std::size_t iterations() const { return residuals.size(); }
};

/// iter,residual,contraction,norm
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

/// Integral from 0 to t_index of e^{(t-s) Lap} phi(s) ds by the chosen rule,
/// heat factor exact per mode. Throws std::invalid_argument on an empty
/// trajectory and std::out_of_range on a bad index.
StateTriple duhamel_integral(const Trajectory& phi, std::size_t t_index,
                             Quadrature q = Quadrature::trapezoid);
/// Same at every stored time, computed by the one-step recursion.
Trajectory duhamel_all(const Trajectory& phi, Quadrature q = Quadrature::trapezoid);

/// Heat flow e^{t Lap} U0 on the uniform grid of `config`.
Trajectory heat_flow(const StateTriple& U0, double T, int steps);

/// zeta(U, V)(t) = K Omega(U, V)(t) at every stored time. Throws
/// std::invalid_argument when the time grids differ.
Trajectory zeta(const Trajectory& U, const Trajectory& V, const NonlinearOptions& opts = {},
                Quadrature q = Quadrature::trapezoid);

/// sup_t ||U - e^{t Lap} U0 - zeta(U, U)|| / sup_t ||U||.
double duhamel_residual(const StateTriple& U0, const Trajectory& U, const NonlinearOptions& opts = {},
                        Quadrature q = Quadrature::trapezoid);

struct SolveResult {
  Trajectory trajectory;
  IterationTrace trace;
};

/// U^{n+1} = e^{t Lap} U0 + zeta(U^n, U^n), U^0 the heat flow of U0.
SolveResult picard_solve(const StateTriple& U0, const SolverConfig& config);

/// The four-operator iteration on (u, B) with J = curl B rebuilt each sweep.
/// Norms are sup_t ||u|| + (2 + T) sup_t (||B|| + ||curl B||).
SolveResult coupled_picard_solve(const SpectralField& u0, const SpectralField& B0, const SolverConfig& config);

struct CoupledRhs {
  SpectralField du, dB;
};
/// Split nonlinearity of the coupled iteration: psi_1 + psi_2 for u and
/// (1 - Lap)^-1 curl (psi_3 + psi_4) for B, both Leray projected.
CoupledRhs coupled_rhs(const SpectralField& u, const SpectralField& B, const NonlinearOptions& opts = {});

/// Coupled residual: sup_t of the (u, B) Duhamel defect over sup_t ||(u, B)||.
double coupled_duhamel_residual(const SpectralField& u0, const SpectralField& B0, const Trajectory& traj,
                                const NonlinearOptions& opts = {}, Quadrature q = Quadrature::trapezoid);

/// U = V + W with V the heat flow; W solves W = zeta(V,V) + zeta(V,W) + zeta(W,V) + zeta(W,W).
/// The final time is halved until the measured linear norm is below one and the
/// forcing is below (1 - lambda)^2 / (4 gamma) and the iteration converges.
SolveResult perturbative_solve(const StateTriple& U0, const SolverConfig& config, int max_bisections = 10);

using StateRhs = std::function<StateTriple(const StateTriple&)>;

/// Exponential time differencing for dU/dt = Lap U + N(U): exact heat factor,
/// ETD1 or ETDRK2 for N. The default N is Omega(U, U). Throws std::runtime_error
/// when the state stops being finite or grows by more than 1e6.
Trajectory etd_timestep_oracle(const StateTriple& U0, const SolverConfig& config, const StateRhs& rhs = {});

enum class FixedPointMode { plain, coupled, linear_bilinear };

FixedPointMode parse_fixed_point_mode(const std::string& name);

/// Scalar versions of the three fixed-point problems the solvers rely on.
///   plain:            x = y + eta x^2
///   linear_bilinear:  x = y + lambda x + gamma x^2
///   coupled:          x = x0 + eta x^2 + (1 + T) eta y^2,  y = y0 + eta x y + eta y^2
struct AbstractParameters {
  double eta = 1.0;
  double y = 0.1;
  double lambda = 0.5;
  double gamma = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double T = 1.0;
  int max_iter = 10000;
  double tol = 1e-15;
};

struct AbstractResult {
  std::vector<double> solution;  // x, or (x, y) for coupled
  IterationTrace trace;
  bool hypothesis_holds = false;
  double hypothesis_value = 0.0;  // data size the smallness hypothesis constrains
  double hypothesis_bound = 0.0;  // its bound
  double ball_norm = 0.0;         // norm of the limit
  double ball_radius = 0.0;       // its bound
  bool in_ball = false;
};

AbstractResult abstract_fixed_point(FixedPointMode mode, const AbstractParameters& params);

}  // namespace hallmhd
