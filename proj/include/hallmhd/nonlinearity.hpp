#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Q(u,v) = div(u (x) v) with (u (x) v)_ij = u_j v_i, P(u,v) = u x v,
/// R(u,v) = curl(u x v).
enum class BilinearKind { Q, P, R };

SpectralField bilinear_primitive(BilinearKind kind, const SpectralField& u, const SpectralField& v);

/// Knobs on the induction forcing shared by Theta and the second row of Gamma.
struct NonlinearOptions {
  /// Coefficient of J.grad J in the induction forcing. The reduced system is
  /// stated with -1; deriving it from the (u, H) form gives +2.
  double jgradj_coefficient = -1.0;
  /// Adds grad(K3 . L1) to the second Gamma row. Omega must not see it.
  bool include_gradient_term = false;
};

struct ThetaResult {
  SpectralField theta;
  std::vector<std::string> warnings;
};

/// Theta = u x B - 2 B.grad B + c J.grad J - curl(J x u) - 2 J.grad u + grad(J . u),
/// c = opts.jgradj_coefficient. The gradient term is always included here.
/// Inputs whose divergence ratio exceeds 1e-8 produce a warning, not an error.
ThetaResult build_theta(const SpectralField& u, const SpectralField& B, const SpectralField& J,
                        const NonlinearOptions& opts = {});

struct NonlinearOutput {
  SpectralField gamma1, gamma2;
  StateTriple omega;
};

/// Gamma rows and Omega = P(Gamma1, (1-Lap)^-1 curl Gamma2, -Lap (1-Lap)^-1 Gamma2).
NonlinearOutput build_gamma_omega(const StateTriple& K, const StateTriple& L, const NonlinearOptions& opts = {});

/// Omega only. Reuses physical samples when K and L are the same object.
StateTriple omega(const StateTriple& K, const StateTriple& L, const NonlinearOptions& opts = {});

/// Nonlinear right-hand side of the (u, B, J) system: Omega(U, U).
StateTriple rhs_S(const StateTriple& U, const NonlinearOptions& opts = {});

struct HallRhs {
  SpectralField du;  // P(J x H - u.grad u)
  SpectralField dH;  // curl(u x H) + curl(J x curl u) - 2 curl(J x H)
};

/// Nonlinear right-hand sides of the (u, H) form with H = (1-Lap) B, J = curl B.
HallRhs rhs_HMHD(const SpectralField& u, const SpectralField& B);

/// The (u, H) right-hand side mapped onto (u, B, J): dB = (1-Lap)^-1 dH, dJ = curl dB.
StateTriple rhs_HMHD_mapped(const StateTriple& U);

struct EquivalenceReport {
  double residual_u = 0, residual_B = 0, residual_J = 0;
  double coefficient_used = 0;
  /// Least-squares J.grad J coefficient that best matches the (u, H) form.
  double implied_coefficient = 0;
  /// Residual of the B and J rows with the implied coefficient.
  double residual_at_implied = 0;
  bool mismatch = false;
  std::string finding;

  double max_residual() const;
};

/// Compares rhs_S(u, B, curl B) against the mapped (u, H) right-hand side row by row.
EquivalenceReport equivalence_check(const SpectralField& u, const SpectralField& B,
                                    const NonlinearOptions& opts = {}, double tol = 1e-10);

struct IdentityResidual {
  std::string name;
  double residual = 0;
};

/// Relative residuals of
///   curl(U x V) = V.grad U - U.grad V
///   (curl U) x U = U.grad U - grad|U|^2 / 2
///   V x curl U + U x curl V = -curl(U x V) - 2 U.grad V + grad(U . V)
///   curl curl U = -Lap U
std::vector<IdentityResidual> verify_vector_identities(const SpectralField& U, const SpectralField& V);

/// identity_name,residual rows.
void write_identity_csv(std::ostream& os, const std::vector<IdentityResidual>& rows);

}  // namespace hallmhd
