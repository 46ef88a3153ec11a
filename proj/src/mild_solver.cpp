#include "hallmhd/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hallmhd/csv.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/parallel.hpp"

namespace hallmhd {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDataCheck = 1e-8;
constexpr double kBlowUp = 1e6;
// Updates at least as large as the iterate this many times in a row mean divergence.
constexpr int kGrowthStreak = 3;

std::vector<double> heat_symbol(const Grid3& g, double t) {
  const ModeTable& m = modes(g);
  std::vector<double> s(m.xi_sq.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(-t * m.xi_sq[i]);
  return s;
}

void scale_modes(SpectralField& f, const std::vector<double>& sym) {
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (std::size_t i = 0; i < sym.size(); ++i) comp[i] *= sym[i];
  }
}

void scale_modes(StateTriple& s, const std::vector<double>& sym) {
  for (int r = 0; r < 3; ++r) scale_modes(s[r], sym);
}

StateTriple scaled(StateTriple s, const std::vector<double>& sym) {
  scale_modes(s, sym);
  return s;
}

Trajectory add(Trajectory a, const Trajectory& b) {
  for (std::size_t m = 0; m < a.size(); ++m) a.states[m] += b.states[m];
  return a;
}

void clean(Trajectory& t) {
  for (auto& s : t.states)
    for (int r = 0; r < 3; ++r) s[r] = leray_project(s[r]);
}

void require_same_times(const Trajectory& a, const Trajectory& b) {
  a.validate();
  b.validate();
  if (a.times != b.times) throw std::invalid_argument("zeta: trajectories must share the time grid");
  require_same_grid(a.grid(), b.grid());
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

bool growing(const IterationTrace& tr) {
  const std::size_t n = tr.residuals.size();
  if (n < static_cast<std::size_t>(kGrowthStreak) + 1) return false;
  for (std::size_t i = n - kGrowthStreak; i < n; ++i)
    if (!(tr.residuals[i] >= 1.0)) return false;
  return true;
}

bool finite_state(const StateTriple& s) {
  for (int r = 0; r < 3; ++r)
    for (const cplx& c : s[r].coefficients())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

void require_data(const StateTriple& U0, bool check_current) {
  for (int r = 0; r < 3; ++r) {
    if (U0[r].rank() != Rank::vector3) throw std::invalid_argument("solver: data rows must be vector fields");
    if (divergence_ratio(U0[r]) > kDataCheck) throw std::invalid_argument("solver: data must be divergence-free");
  }
  if (check_current && relative_difference(U0.J, curl(U0.B)) > kDataCheck)
    throw std::invalid_argument("solver: J row must equal curl B");
}

// sup_t ||u|| and sup_t (||B|| + ||curl B||)
double x_norm(const Trajectory& t) {
  double m = 0.0;
  for (const auto& s : t.states) m = std::max(m, l2_norm(s.u));
  return m;
}

double y_norm(const Trajectory& t) {
  double m = 0.0;
  for (const auto& s : t.states) m = std::max(m, l2_norm(s.B) + l2_norm(curl(s.B)));
  return m;
}

double weighted_norm(const Trajectory& t, double T) { return x_norm(t) + (2.0 + T) * y_norm(t); }

// phi_1(z) = (e^z - 1) / z and phi_2(z) = (e^z - 1 - z) / z^2 for z <= 0.
double etd_phi1(double z) { return std::abs(z) < 1e-4 ? 1.0 + z / 2.0 + z * z / 6.0 : std::expm1(z) / z; }
double etd_phi2(double z) {
  return std::abs(z) < 1e-3 ? 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 : (std::expm1(z) - z) / (z * z);
}

Trajectory forcing_trajectory(const Trajectory& shape) {
  Trajectory f;
  f.times = shape.times;
  f.states.resize(shape.size());
  return f;
}

}  // namespace

Quadrature parse_quadrature(const std::string& name) {
  if (name == "trapezoid") return Quadrature::trapezoid;
  if (name == "left-endpoint" || name == "left_endpoint") return Quadrature::left_endpoint;
  throw std::invalid_argument("unknown quadrature '" + name + "'");
}

std::string to_string(Quadrature q) { return q == Quadrature::trapezoid ? "trapezoid" : "left-endpoint"; }

void SolverConfig::validate(const Grid3& grid) const {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("solver: T must be positive");
  if (steps < 1) throw std::invalid_argument("solver: steps must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  if (etd_order != 1 && etd_order != 2) throw std::invalid_argument("solver: etd_order must be 1 or 2");
  if (etd_substeps < 1) throw std::invalid_argument("solver: etd_substeps must be >= 1");
  const double stiffness = T / steps * grid.max_wavenumber_sq();
  if (stiffness > kMaxStepStiffness)
    throw std::invalid_argument("solver: (T/steps)|xi_max|^2 = " + format_double(stiffness) +
                                " exceeds 10; increase steps");
}

void IterationTrace::record(double residual, double norm) {
  const double prev = residuals.empty() ? kNaN : residuals.back();
  contraction_estimates.push_back(prev > 0.0 ? residual / prev : kNaN);
  residuals.push_back(residual);
  norms.push_back(norm);
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "iter,residual,contraction,norm\n";
  for (std::size_t i = 0; i < trace.residuals.size(); ++i)
    write_csv_row(os, {std::to_string(i + 1), format_double(trace.residuals[i]),
                       format_double(trace.contraction_estimates[i]), format_double(trace.norms[i])});
}

StateTriple duhamel_integral(const Trajectory& phi, std::size_t t_index, Quadrature q) {
  if (phi.states.empty()) throw std::invalid_argument("duhamel_integral: empty trajectory");
  phi.validate();
  if (t_index >= phi.size()) throw std::out_of_range("duhamel_integral: time index outside trajectory");
  const Grid3& g = phi.grid();
  StateTriple acc = StateTriple::zero(g);
  if (t_index == 0) return acc;
  const double h = phi.dt();
  const double t = phi.times[t_index];
  for (std::size_t k = 0; k <= t_index; ++k) {
    double w = h;
    if (q == Quadrature::trapezoid && (k == 0 || k == t_index)) w = 0.5 * h;
    if (q == Quadrature::left_endpoint && k == t_index) continue;
    acc.axpy(w, scaled(phi.states[k], heat_symbol(g, t - phi.times[k])));
  }
  return acc;
}

Trajectory duhamel_all(const Trajectory& phi, Quadrature q) {
  if (phi.states.empty()) throw std::invalid_argument("duhamel_integral: empty trajectory");
  phi.validate();
  const Grid3& g = phi.grid();
  Trajectory out = forcing_trajectory(phi);
  out.states[0] = StateTriple::zero(g);
  if (phi.size() == 1) return out;
  const double h = phi.dt();
  const std::vector<double> E = heat_symbol(g, h);
  for (std::size_t m = 0; m + 1 < phi.size(); ++m) {
    StateTriple next = out.states[m];
    if (q == Quadrature::trapezoid) {
      next.axpy(0.5 * h, phi.states[m]);
      scale_modes(next, E);
      next.axpy(0.5 * h, phi.states[m + 1]);
    } else {
      next.axpy(h, phi.states[m]);
      scale_modes(next, E);
    }
    out.states[m + 1] = std::move(next);
  }
  return out;
}

Trajectory heat_flow(const StateTriple& U0, double T, int steps) {
  Trajectory t = Trajectory::uniform(T, steps, U0);
  for (std::size_t m = 0; m < t.size(); ++m) scale_modes(t.states[m], heat_symbol(U0.grid(), t.times[m]));
  return t;
}

Trajectory zeta(const Trajectory& U, const Trajectory& V, const NonlinearOptions& opts, Quadrature q) {
  require_same_times(U, V);
  Trajectory f = forcing_trajectory(U);
  parallel_for(U.size(), [&](std::size_t m) { f.states[m] = omega(U.states[m], V.states[m], opts); });
  return duhamel_all(f, q);
}

double duhamel_residual(const StateTriple& U0, const Trajectory& U, const NonlinearOptions& opts, Quadrature q) {
  const Trajectory V = heat_flow(U0, U.final_time(), static_cast<int>(U.size()) - 1);
  const Trajectory rhs = add(V, zeta(U, U, opts, q));
  return ratio(sup_norm(difference(U, rhs)), sup_norm(U));
}

SolveResult picard_solve(const StateTriple& U0, const SolverConfig& config) {
  const Grid3& g = U0.grid();
  config.validate(g);
  if (config.check_data) require_data(U0, true);
  const Trajectory V = heat_flow(U0, config.T, config.steps);
  SolveResult res;
  IterationTrace& tr = res.trace;
  tr.final_T = config.T;
  tr.data_norm = sup_norm(V);

  Trajectory U = V;
  Trajectory prev_Z;
  double prev_norm = 0.0;
  Trajectory prev_U;
  tr.outcome = "max_iter";
  for (int it = 0; it < config.max_iter; ++it) {
    Trajectory Z = zeta(U, U, config.nonlinear, config.quadrature);
    const double u_norm = sup_norm(U);
    if (u_norm > 0.0) tr.eta_hat = std::max(tr.eta_hat, sup_norm(Z) / (u_norm * u_norm));
    if (!prev_Z.states.empty()) {
      const double du = sup_norm(difference(U, prev_U));
      if (du > 0.0)
        tr.eta_hat = std::max(tr.eta_hat, sup_norm(difference(Z, prev_Z)) / ((u_norm + prev_norm) * du));
    }
    Trajectory next = add(V, Z);
    clean(next);
    const double n_next = sup_norm(next);
    const double r = ratio(sup_norm(difference(next, U)), n_next);
    tr.record(r, n_next);
    prev_U = std::move(U);
    prev_Z = std::move(Z);
    prev_norm = u_norm;
    U = std::move(next);
    if (!std::isfinite(n_next) || n_next > kBlowUp * std::max(tr.data_norm, 1e-300) || growing(tr)) {
      tr.outcome = "diverged";
      break;
    }
    if (r <= config.tol) {
      tr.converged = true;
      tr.outcome = "converged";
      break;
    }
  }
  res.trajectory = std::move(U);
  return res;
}

CoupledRhs coupled_rhs(const SpectralField& u, const SpectralField& B, const NonlinearOptions& opts) {
  using K = BilinearKind;
  const SpectralField J = curl(B);
  const SpectralField qBB = bilinear_primitive(K::Q, B, B);
  const SpectralField qJJ = bilinear_primitive(K::Q, J, J);
  const SpectralField psi1 = -1.0 * bilinear_primitive(K::Q, u, u);
  const SpectralField psi2 = qBB - qJJ;
  const SpectralField psi3 =
      bilinear_primitive(K::P, u, B) - bilinear_primitive(K::R, J, u) - 2.0 * bilinear_primitive(K::Q, J, u);
  const SpectralField psi4 = -2.0 * qBB + opts.jgradj_coefficient * qJJ;
  CoupledRhs out;
  out.du = leray_project(psi1 + psi2);
  out.dB = leray_project(apply_multiplier(Multiplier::helmholtz_inverse(), curl(psi3 + psi4)));
  return out;
}

namespace {

Trajectory coupled_forcing(const Trajectory& state, const NonlinearOptions& opts) {
  Trajectory f = forcing_trajectory(state);
  parallel_for(state.size(), [&](std::size_t m) {
    CoupledRhs r = coupled_rhs(state.states[m].u, state.states[m].B, opts);
    f.states[m].u = std::move(r.du);
    f.states[m].J = curl(r.dB);
    f.states[m].B = std::move(r.dB);
  });
  return f;
}

}  // namespace

double coupled_duhamel_residual(const SpectralField& u0, const SpectralField& B0, const Trajectory& traj,
                                const NonlinearOptions& opts, Quadrature q) {
  StateTriple U0{u0, B0, curl(B0)};
  const double T = traj.final_time();
  const Trajectory V = heat_flow(U0, T, static_cast<int>(traj.size()) - 1);
  const Trajectory rhs = add(V, duhamel_all(coupled_forcing(traj, opts), q));
  return ratio(weighted_norm(difference(traj, rhs), T), weighted_norm(traj, T));
}

SolveResult coupled_picard_solve(const SpectralField& u0, const SpectralField& B0, const SolverConfig& config) {
  const Grid3& g = u0.grid();
  config.validate(g);
  require_same_grid(g, B0.grid());
  const StateTriple U0{u0, B0, curl(B0)};
  if (config.check_data) require_data(U0, false);
  const double T = config.T;
  const Trajectory V = heat_flow(U0, T, config.steps);

  SolveResult res;
  IterationTrace& tr = res.trace;
  tr.final_T = T;
  // alpha = ||x0|| + ||y0|| + ||z0|| with z0 = (1 + T) y0
  tr.data_norm = weighted_norm(V, T);

  Trajectory U = V;
  tr.outcome = "max_iter";
  for (int it = 0; it < config.max_iter; ++it) {
    const Trajectory A = duhamel_all(coupled_forcing(U, config.nonlinear), config.quadrature);
    const double w = weighted_norm(U, T);
    if (w > 0.0) tr.eta_hat = std::max(tr.eta_hat, weighted_norm(A, T) / (w * w));
    Trajectory next = add(V, A);
    clean(next);
    for (auto& s : next.states) s.J = curl(s.B);
    const double n_next = weighted_norm(next, T);
    const double r = ratio(weighted_norm(difference(next, U), T), n_next);
    tr.record(r, n_next);
    U = std::move(next);
    if (!std::isfinite(n_next) || n_next > kBlowUp * std::max(tr.data_norm, 1e-300) || growing(tr)) {
      tr.outcome = "diverged";
      break;
    }
    if (r <= config.tol) {
      tr.converged = true;
      tr.outcome = "converged";
      break;
    }
  }
  res.trajectory = std::move(U);
  return res;
}

namespace {

// L(W) = zeta(V, W) + zeta(W, V)
Trajectory linear_part(const Trajectory& V, const Trajectory& W, const SolverConfig& c) {
  return add(zeta(V, W, c.nonlinear, c.quadrature), zeta(W, V, c.nonlinear, c.quadrature));
}

}  // namespace

SolveResult perturbative_solve(const StateTriple& U0, const SolverConfig& config, int max_bisections) {
  const Grid3& g = U0.grid();
  config.validate(g);
  if (config.check_data) require_data(U0, true);
  SolverConfig c = config;
  SolveResult res;
  for (int b = 0; b <= max_bisections; ++b, c.T *= 0.5) {
    IterationTrace tr;
    tr.final_T = c.T;
    const Trajectory V = heat_flow(U0, c.T, c.steps);
    const Trajectory Y = zeta(V, V, c.nonlinear, c.quadrature);
    const double v_norm = sup_norm(V), y = sup_norm(Y);
    tr.data_norm = y;
    double gamma = v_norm > 0.0 ? y / (v_norm * v_norm) : 0.0;

    // power iteration for the norm of the linear part
    double lambda = 0.0;
    if (y > 0.0) {
      Trajectory w = Y;
      for (int k = 0; k < 4; ++k) {
        const double wn = sup_norm(w);
        if (wn == 0.0) break;
        Trajectory lw = linear_part(V, w, c);
        const double ln = sup_norm(lw);
        lambda = std::max(lambda, ln / wn);
        const Trajectory ww = zeta(w, w, c.nonlinear, c.quadrature);
        gamma = std::max(gamma, sup_norm(ww) / (wn * wn));
        w = std::move(lw);
      }
    }
    tr.lambda_hat = lambda;
    tr.eta_hat = gamma;
    const bool hypothesis = lambda < 1.0 && (gamma == 0.0 || y < (1.0 - lambda) * (1.0 - lambda) / (4.0 * gamma));

    Trajectory W = Trajectory::uniform(c.T, c.steps, StateTriple::zero(g));
    tr.outcome = "shrink T";
    if (hypothesis) {
      tr.outcome = "max_iter";
      for (int it = 0; it < c.max_iter; ++it) {
        // zeta(V + W, V + W) = zeta(V,V) + zeta(V,W) + zeta(W,V) + zeta(W,W)
        Trajectory next = zeta(add(V, W), add(V, W), c.nonlinear, c.quadrature);
        clean(next);
        const double u_norm = sup_norm(add(V, next));
        const double r = ratio(sup_norm(difference(next, W)), u_norm);
        tr.record(r, sup_norm(next));
        W = std::move(next);
        if (!std::isfinite(u_norm) || u_norm > kBlowUp * std::max(v_norm, 1e-300) || growing(tr)) {
          tr.outcome = "diverged";
          break;
        }
        if (r <= c.tol) {
          tr.converged = true;
          tr.outcome = "converged";
          break;
        }
      }
    }
    res.trace = std::move(tr);
    res.trajectory = add(V, W);
    if (res.trace.converged) return res;
  }
  res.trace.outcome = "shrink T";
  return res;
}

Trajectory etd_timestep_oracle(const StateTriple& U0, const SolverConfig& config, const StateRhs& rhs) {
  const Grid3& g = U0.grid();
  config.validate(g);
  const StateRhs N = rhs ? rhs : [&](const StateTriple& s) { return rhs_S(s, config.nonlinear); };
  const int sub = config.etd_substeps;
  const double h = config.T / (static_cast<double>(config.steps) * sub);
  const ModeTable& mt = modes(g);
  const std::size_t nb = mt.xi_sq.size();
  std::vector<double> E(nb), P1(nb), P2(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const double z = -h * mt.xi_sq[i];
    E[i] = std::exp(z);
    P1[i] = h * etd_phi1(z);
    P2[i] = h * etd_phi2(z);
  }
  Trajectory out = Trajectory::uniform(config.T, config.steps, U0);
  const double limit = kBlowUp * std::max(l2_norm(U0), 1e-300);
  StateTriple U = U0;
  for (int m = 0; m < config.steps; ++m) {
    for (int s = 0; s < sub; ++s) {
      const StateTriple Nn = N(U);
      StateTriple a = scaled(U, E);
      a += scaled(Nn, P1);
      if (config.etd_order == 2) {
        StateTriple corr = N(a);
        corr -= Nn;
        a += scaled(std::move(corr), P2);
      }
      U = std::move(a);
    }
    const double n = l2_norm(U);
    if (!finite_state(U) || n > limit)
      throw std::runtime_error("etd oracle: unstable step near t = " + format_double(out.times[m + 1]));
    out.states[static_cast<std::size_t>(m) + 1] = U;
  }
  return out;
}

FixedPointMode parse_fixed_point_mode(const std::string& name) {
  if (name == "plain") return FixedPointMode::plain;
  if (name == "coupled") return FixedPointMode::coupled;
  if (name == "linear_bilinear" || name == "linear-bilinear") return FixedPointMode::linear_bilinear;
  throw std::invalid_argument("unknown fixed-point mode '" + name + "'");
}

AbstractResult abstract_fixed_point(FixedPointMode mode, const AbstractParameters& p) {
  AbstractResult out;
  IterationTrace& tr = out.trace;
  tr.outcome = "max_iter";
  auto finish = [&](double r, double norm) {
    tr.record(r, norm);
    if (!std::isfinite(norm) || norm > kBlowUp) {
      tr.outcome = "diverged";
      return true;
    }
    if (r <= p.tol * std::max(norm, 1.0)) {
      tr.converged = true;
      tr.outcome = "converged";
      return true;
    }
    return false;
  };

  switch (mode) {
    case FixedPointMode::plain:
    case FixedPointMode::linear_bilinear: {
      const bool lin = mode == FixedPointMode::linear_bilinear;
      const double lambda = lin ? p.lambda : 0.0;
      const double gamma = lin ? p.gamma : p.eta;
      tr.eta_hat = gamma;
      tr.lambda_hat = lambda;
      tr.data_norm = std::abs(p.y);
      out.hypothesis_value = std::abs(p.y);
      out.hypothesis_bound = lin ? (1.0 - lambda) * (1.0 - lambda) / (4.0 * gamma) : 1.0 / (4.0 * gamma);
      out.hypothesis_holds = (!lin || lambda < 1.0) && out.hypothesis_value < out.hypothesis_bound;
      double x = 0.0;
      for (int it = 0; it < p.max_iter; ++it) {
        const double next = p.y + lambda * x + gamma * x * x;
        const double r = std::abs(next - x);
        x = next;
        if (finish(r, std::abs(x))) break;
      }
      out.solution = {x};
      out.ball_norm = std::abs(x);
      out.ball_radius = lin ? (1.0 - lambda) / (2.0 * gamma) : 2.0 * std::abs(p.y);
      out.in_ball = out.ball_norm <= out.ball_radius;
      break;
    }
    case FixedPointMode::coupled: {
      const double eta = p.eta, w = 2.0 + p.T;
      tr.eta_hat = eta;
      const double z0 = (1.0 + p.T) * p.y0;
      tr.data_norm = std::abs(p.x0) + std::abs(p.y0) + std::abs(z0);
      out.hypothesis_value = std::abs(p.x0) + w * std::abs(p.y0);
      out.hypothesis_bound = 1.0 / (24.0 * eta);
      out.hypothesis_holds = out.hypothesis_value < out.hypothesis_bound;
      // (Seq): A1 = eta x x, A2 = (1 + T) eta y y, A3 = eta x y, A4 = eta y y, z = (1 + T) y
      double x = p.x0, y = p.y0, z = z0;
      for (int it = 0; it < p.max_iter; ++it) {
        const double xn = p.x0 + eta * x * x + eta * y * z;
        const double yn = p.y0 + eta * x * y + eta * y * y;
        const double zn = z0 + eta * x * z + eta * y * z;
        const double r = std::abs(xn - x) + std::abs(yn - y) + std::abs(zn - z);
        x = xn;
        y = yn;
        z = zn;
        if (finish(r, std::abs(x) + std::abs(y) + std::abs(z))) break;
      }
      out.solution = {x, y};
      out.ball_norm = std::abs(x) + w * std::abs(y);
      out.ball_radius = 1.0 / (12.0 * eta);
      out.in_ball = out.ball_norm < out.ball_radius;
      break;
    }
  }
  return out;
}

}  // namespace hallmhd
