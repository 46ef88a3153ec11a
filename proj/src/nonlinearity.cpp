#include "hallmhd/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fft.hpp"
#include "hallmhd/csv.hpp"
#include "hallmhd/operators.hpp"

namespace hallmhd {
namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kDivergenceWarning = 1e-8;

void require_vector(const SpectralField& f, const char* what) {
  if (f.rank() != Rank::vector3) throw std::invalid_argument(std::string(what) + ": vector3 field required");
}

void require_triple(const StateTriple& s, const char* what) {
  for (int i = 0; i < 3; ++i) require_vector(s[i], what);
  require_same_grid(s.u.grid(), s.B.grid());
  require_same_grid(s.u.grid(), s.J.grid());
}

const std::vector<double>& xi_axis(const ModeTable& t, int j) {
  return j == 0 ? t.xi1 : (j == 1 ? t.xi2 : t.xi3);
}

// Forward transform of one physical product and accumulation into out[i],
// either as w * d_j(prod) (j >= 0) or as w * prod (j < 0).
class Accumulator {
 public:
  explicit Accumulator(const Grid3& g) : grid_(g), t_(modes(g)), band_(g.band_size()) {}

  void add(std::span<const double> prod, SpectralField& out, int i, int j, double w) {
    detail::forward_component(grid_, prod, band_);
    auto oi = out.component(i);
    if (j < 0) {
      for (std::size_t m = 0; m < band_.size(); ++m) oi[m] += w * band_[m];
      return;
    }
    const auto& xi = xi_axis(t_, j);
    for (std::size_t m = 0; m < band_.size(); ++m) oi[m] += (w * xi[m]) * I * band_[m];
  }

 private:
  const Grid3& grid_;
  const ModeTable& t_;
  std::vector<cplx> band_;
};

struct PhysicalTriple {
  RealField f[3];
  std::span<const double> at(int field, int comp) const { return f[field].component(comp); }
};

PhysicalTriple physical(const StateTriple& s) {
  return {{to_physical(s.u), to_physical(s.B), to_physical(s.J)}};
}

std::pair<SpectralField, SpectralField> gamma_rows(const StateTriple& K, const StateTriple& L,
                                                   const NonlinearOptions& opts) {
  require_triple(K, "gamma");
  require_triple(L, "gamma");
  require_same_grid(K.grid(), L.grid());
  const Grid3& g = K.grid();
  const PhysicalTriple pk = physical(K);
  const PhysicalTriple pl = &K == &L ? PhysicalTriple{} : physical(L);
  const PhysicalTriple& ql = &K == &L ? pk : pl;

  SpectralField g1(g, Rank::vector3), g2(g, Rank::vector3), cr(g, Rank::vector3);
  Accumulator acc(g);
  const std::size_t np = g.point_count();
  std::vector<double> buf(np);
  const double c = opts.jgradj_coefficient;

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // row 1: Q(K2,L2) - Q(K1,L1) - Q(K3,L3)
      {
        const auto a2 = pk.at(1, j), b2 = ql.at(1, i);
        const auto a1 = pk.at(0, j), b1 = ql.at(0, i);
        const auto a3 = pk.at(2, j), b3 = ql.at(2, i);
        for (std::size_t x = 0; x < np; ++x) buf[x] = a2[x] * b2[x] - a1[x] * b1[x] - a3[x] * b3[x];
        acc.add(buf, g1, i, j, 1.0);
      }
      // row 2 tensor part: c Q(K3,L3) - 2 Q(K2,L2) - 2 Q(K3,L1) [+ grad(K3 . L1)]
      {
        const auto k3 = pk.at(2, j), l3 = ql.at(2, i);
        const auto k2 = pk.at(1, j), l2 = ql.at(1, i);
        const auto l1 = ql.at(0, i);
        for (std::size_t x = 0; x < np; ++x) buf[x] = c * k3[x] * l3[x] - 2.0 * k2[x] * l2[x] - 2.0 * k3[x] * l1[x];
        if (opts.include_gradient_term && i == j) {
          for (int d = 0; d < 3; ++d) {
            const auto kd = pk.at(2, d), ld = ql.at(0, d);
            for (std::size_t x = 0; x < np; ++x) buf[x] += kd[x] * ld[x];
          }
        }
        acc.add(buf, g2, i, j, 1.0);
      }
    }

  // P(K1,L2) and the cross product inside R(K3,L1)
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    {
      const auto ka = pk.at(0, a), kb = pk.at(0, b), la = ql.at(1, a), lb = ql.at(1, b);
      for (std::size_t x = 0; x < np; ++x) buf[x] = ka[x] * lb[x] - kb[x] * la[x];
      acc.add(buf, g2, i, -1, 1.0);
    }
    {
      const auto ka = pk.at(2, a), kb = pk.at(2, b), la = ql.at(0, a), lb = ql.at(0, b);
      for (std::size_t x = 0; x < np; ++x) buf[x] = ka[x] * lb[x] - kb[x] * la[x];
      acc.add(buf, cr, i, -1, 1.0);
    }
  }
  g2 -= curl(cr);
  return {std::move(g1), std::move(g2)};
}

StateTriple omega_from_gamma(const SpectralField& g1, const SpectralField& g2) {
  StateTriple w;
  w.u = leray_project(g1);
  w.B = leray_project(apply_multiplier(Multiplier::helmholtz_inverse(), curl(g2)));
  w.J = leray_project(apply_multiplier(Multiplier::neg_laplacian_helmholtz(), g2));
  return w;
}

// u.grad v taken literally: sum_j u_j d_j v_i.
SpectralField directional(const SpectralField& u, const SpectralField& v) {
  const Grid3& g = u.grid();
  const RealField pu = to_physical(u);
  SpectralField out(g, Rank::vector3);
  Accumulator acc(g);
  std::vector<double> buf(g.point_count());
  for (int i = 0; i < 3; ++i) {
    const RealField dv = to_physical(grad(v.scalar_component(i)));
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int j = 0; j < 3; ++j) {
      const auto uj = pu.component(j), dj = dv.component(j);
      for (std::size_t x = 0; x < buf.size(); ++x) buf[x] += uj[x] * dj[x];
    }
    acc.add(buf, out, i, -1, 1.0);
  }
  return out;
}

double relative_residual(const SpectralField& lhs, const SpectralField& rhs) {
  const double scale = std::max(l2_norm(lhs), l2_norm(rhs));
  if (scale == 0.0) return 0.0;
  return l2_norm(lhs - rhs) / scale;
}

}  // namespace

SpectralField bilinear_primitive(BilinearKind kind, const SpectralField& u, const SpectralField& v) {
  require_vector(u, "bilinear_primitive");
  require_vector(v, "bilinear_primitive");
  require_same_grid(u.grid(), v.grid());
  switch (kind) {
    case BilinearKind::Q:
      return advect(u, v);
    case BilinearKind::P:
      return cross(u, v);
    case BilinearKind::R:
      return curl(cross(u, v));
  }
  throw std::invalid_argument("bilinear_primitive: unknown kind");
}

ThetaResult build_theta(const SpectralField& u, const SpectralField& B, const SpectralField& J,
                        const NonlinearOptions& opts) {
  for (const SpectralField* f : {&u, &B, &J}) require_vector(*f, "build_theta");
  require_same_grid(u.grid(), B.grid());
  require_same_grid(u.grid(), J.grid());
  ThetaResult r;
  const char* names[3] = {"u", "B", "J"};
  const SpectralField* fields[3] = {&u, &B, &J};
  for (int i = 0; i < 3; ++i) {
    const double ratio = divergence_ratio(*fields[i]);
    if (ratio > kDivergenceWarning) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "%s is not divergence-free (ratio %.3e)", names[i], ratio);
      r.warnings.emplace_back(msg);
    }
  }
  SpectralField theta = cross(u, B);
  theta.axpy(-2.0, directional(B, B));
  theta.axpy(opts.jgradj_coefficient, directional(J, J));
  theta -= curl(cross(J, u));
  theta.axpy(-2.0, directional(J, u));
  theta += grad(dot(J, u));
  r.theta = std::move(theta);
  return r;
}

NonlinearOutput build_gamma_omega(const StateTriple& K, const StateTriple& L, const NonlinearOptions& opts) {
  auto [g1, g2] = gamma_rows(K, L, opts);
  NonlinearOutput out;
  out.omega = omega_from_gamma(g1, g2);
  out.gamma1 = std::move(g1);
  out.gamma2 = std::move(g2);
  return out;
}

StateTriple omega(const StateTriple& K, const StateTriple& L, const NonlinearOptions& opts) {
  auto [g1, g2] = gamma_rows(K, L, opts);
  return omega_from_gamma(g1, g2);
}

StateTriple rhs_S(const StateTriple& U, const NonlinearOptions& opts) { return omega(U, U, opts); }

HallRhs rhs_HMHD(const SpectralField& u, const SpectralField& B) {
  require_vector(u, "rhs_HMHD");
  require_vector(B, "rhs_HMHD");
  require_same_grid(u.grid(), B.grid());
  const SpectralField J = curl(B);
  const SpectralField H = B + (-1.0) * apply_multiplier(Multiplier::laplacian(), B);
  const SpectralField JxH = cross(J, H);
  HallRhs r;
  r.du = leray_project(JxH - advect(u, u));
  SpectralField inner = cross(u, H) + cross(J, curl(u));
  inner.axpy(-2.0, JxH);
  r.dH = curl(inner);
  return r;
}

StateTriple rhs_HMHD_mapped(const StateTriple& U) {
  HallRhs h = rhs_HMHD(U.u, U.B);
  StateTriple out;
  out.u = std::move(h.du);
  out.B = apply_multiplier(Multiplier::helmholtz_inverse(), h.dH);
  out.J = curl(out.B);
  return out;
}

double EquivalenceReport::max_residual() const { return std::max({residual_u, residual_B, residual_J}); }

EquivalenceReport equivalence_check(const SpectralField& u, const SpectralField& B, const NonlinearOptions& opts,
                                    double tol) {
  StateTriple U;
  U.u = u;
  U.B = B;
  U.J = curl(B);
  const StateTriple target = rhs_HMHD_mapped(U);

  NonlinearOptions o0 = opts, o1 = opts;
  o0.jgradj_coefficient = 0.0;
  o1.jgradj_coefficient = 1.0;
  const StateTriple w0 = rhs_S(U, o0);
  const StateTriple dw = rhs_S(U, o1) - w0;
  const StateTriple w = rhs_S(U, opts);

  EquivalenceReport r;
  r.coefficient_used = opts.jgradj_coefficient;
  r.residual_u = relative_residual(w.u, target.u);
  r.residual_B = relative_residual(w.B, target.B);
  r.residual_J = relative_residual(w.J, target.J);

  const double dd = coeff_dot(dw.B, dw.B) + coeff_dot(dw.J, dw.J);
  if (dd > 0.0) {
    const StateTriple gap = target - w0;
    r.implied_coefficient = (coeff_dot(gap.B, dw.B) + coeff_dot(gap.J, dw.J)) / dd;
  } else {
    r.implied_coefficient = opts.jgradj_coefficient;
  }
  StateTriple fitted = w0;
  fitted.axpy(r.implied_coefficient, dw);
  r.residual_at_implied = std::max(relative_residual(fitted.B, target.B), relative_residual(fitted.J, target.J));

  r.mismatch = r.max_residual() > tol;
  if (r.mismatch) {
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "J.grad J coefficient %g disagrees with the (u,H) form (max residual %.3e); "
                  "coefficient %.12g reproduces it to %.3e",
                  r.coefficient_used, r.max_residual(), r.implied_coefficient, r.residual_at_implied);
    r.finding = msg;
  }
  return r;
}

std::vector<IdentityResidual> verify_vector_identities(const SpectralField& U, const SpectralField& V) {
  require_vector(U, "verify_vector_identities");
  require_vector(V, "verify_vector_identities");
  require_same_grid(U.grid(), V.grid());
  std::vector<IdentityResidual> out;
  const SpectralField UxV = cross(U, V);
  const SpectralField curlUxV = curl(UxV);
  const SpectralField UgV = advect(U, V);
  const SpectralField VgU = advect(V, U);

  out.push_back({"curl_of_cross", relative_residual(curlUxV, VgU - UgV)});

  SpectralField rhs2 = advect(U, U);
  rhs2.axpy(-0.5, grad(dot(U, U)));
  out.push_back({"curl_cross_self", relative_residual(cross(curl(U), U), rhs2)});

  SpectralField rhs3 = (-1.0) * curlUxV;
  rhs3.axpy(-2.0, UgV);
  rhs3 += grad(dot(U, V));
  out.push_back({"cross_curl_sum", relative_residual(cross(V, curl(U)) + cross(U, curl(V)), rhs3)});

  out.push_back({"double_curl", relative_residual(curl(curl(U)), (-1.0) * apply_multiplier(Multiplier::laplacian(), U))});
  return out;
}

void write_identity_csv(std::ostream& os, const std::vector<IdentityResidual>& rows) {
  os << "identity_name,residual\n";
  for (const auto& r : rows) write_csv_row(os, {r.name, format_double(r.residual)});
}

}  // namespace hallmhd
