#include "hallmhd/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace hallmhd {
namespace {

constexpr cplx I{0.0, 1.0};

void require_rank(const SpectralField& f, Rank r, const char* what) {
  if (f.rank() != r) throw std::invalid_argument(std::string(what) + ": rank mismatch");
}

}  // namespace

SpectralField differentiate(DiffKind kind, const SpectralField& f) {
  const ModeTable& t = modes(f.grid());
  const std::size_t n = f.grid().band_size();
  switch (kind) {
    case DiffKind::grad: {
      require_rank(f, Rank::scalar, "grad");
      SpectralField g(f.grid(), Rank::vector3);
      const auto s = f.component(0);
      auto g0 = g.component(0), g1 = g.component(1), g2 = g.component(2);
      for (std::size_t i = 0; i < n; ++i) {
        g0[i] = I * t.xi1[i] * s[i];
        g1[i] = I * t.xi2[i] * s[i];
        g2[i] = I * t.xi3[i] * s[i];
      }
      return g;
    }
    case DiffKind::div: {
      require_rank(f, Rank::vector3, "div");
      SpectralField d(f.grid(), Rank::scalar);
      const auto v0 = f.component(0), v1 = f.component(1), v2 = f.component(2);
      auto out = d.component(0);
      for (std::size_t i = 0; i < n; ++i) out[i] = I * (t.xi1[i] * v0[i] + t.xi2[i] * v1[i] + t.xi3[i] * v2[i]);
      return d;
    }
    case DiffKind::curl: {
      require_rank(f, Rank::vector3, "curl");
      SpectralField c(f.grid(), Rank::vector3);
      const auto v0 = f.component(0), v1 = f.component(1), v2 = f.component(2);
      auto c0 = c.component(0), c1 = c.component(1), c2 = c.component(2);
      for (std::size_t i = 0; i < n; ++i) {
        c0[i] = I * (t.xi2[i] * v2[i] - t.xi3[i] * v1[i]);
        c1[i] = I * (t.xi3[i] * v0[i] - t.xi1[i] * v2[i]);
        c2[i] = I * (t.xi1[i] * v1[i] - t.xi2[i] * v0[i]);
      }
      return c;
    }
  }
  throw std::invalid_argument("differentiate: unknown kind");
}

double Multiplier::symbol(double xi_sq) const {
  switch (kind) {
    case Kind::heat: return std::exp(-t * xi_sq);
    case Kind::helmholtz_inverse: return 1.0 / (1.0 + xi_sq);
    case Kind::laplacian: return -xi_sq;
    case Kind::neg_laplacian_helmholtz: return xi_sq / (1.0 + xi_sq);
  }
  return 0.0;
}

SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f) {
  if (m.kind == Multiplier::Kind::heat && !(m.t >= 0.0))
    throw std::invalid_argument("heat multiplier needs t >= 0");
  const ModeTable& t = modes(f.grid());
  const std::size_t n = f.grid().band_size();
  std::vector<double> sym(n);
  for (std::size_t i = 0; i < n; ++i) sym[i] = m.symbol(t.xi_sq[i]);
  SpectralField out = f;
  for (int c = 0; c < out.components(); ++c) {
    auto comp = out.component(c);
    for (std::size_t i = 0; i < n; ++i) comp[i] *= sym[i];
  }
  return out;
}

SpectralField leray_project(const SpectralField& v) {
  require_rank(v, Rank::vector3, "leray_project");
  const ModeTable& t = modes(v.grid());
  const std::size_t n = v.grid().band_size();
  SpectralField out = v;
  auto a = out.component(0), b = out.component(1), c = out.component(2);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.xi_sq[i] == 0.0) continue;
    const cplx proj = (t.xi1[i] * a[i] + t.xi2[i] * b[i] + t.xi3[i] * c[i]) / t.xi_sq[i];
    a[i] -= t.xi1[i] * proj;
    b[i] -= t.xi2[i] * proj;
    c[i] -= t.xi3[i] * proj;
  }
  return out;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid());
  if (f.rank() == Rank::vector3 && g.rank() == Rank::vector3)
    throw std::invalid_argument("pointwise_product: use dot or cross for two vector fields");
  const RealField pf = to_physical(f);
  const RealField pg = to_physical(g);
  const bool f_scalar = f.rank() == Rank::scalar;
  const RealField& s = f_scalar ? pf : pg;
  const RealField& v = f_scalar ? pg : pf;
  RealField out(f.grid(), v.rank);
  const auto sc = s.component(0);
  for (int c = 0; c < v.components(); ++c) {
    const auto vc = v.component(c);
    auto oc = out.component(c);
    for (std::size_t i = 0; i < oc.size(); ++i) oc[i] = sc[i] * vc[i];
  }
  return to_spectral(out);
}

SpectralField dot(const SpectralField& u, const SpectralField& v) {
  require_rank(u, Rank::vector3, "dot");
  require_rank(v, Rank::vector3, "dot");
  require_same_grid(u.grid(), v.grid());
  const RealField pu = to_physical(u);
  const RealField pv = to_physical(v);
  RealField out(u.grid(), Rank::scalar);
  auto o = out.component(0);
  for (int c = 0; c < 3; ++c) {
    const auto a = pu.component(c), b = pv.component(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += a[i] * b[i];
  }
  return to_spectral(out);
}

SpectralField cross(const SpectralField& u, const SpectralField& v) {
  require_rank(u, Rank::vector3, "cross");
  require_rank(v, Rank::vector3, "cross");
  require_same_grid(u.grid(), v.grid());
  const RealField pu = to_physical(u);
  const RealField pv = to_physical(v);
  RealField out(u.grid(), Rank::vector3);
  const auto u0 = pu.component(0), u1 = pu.component(1), u2 = pu.component(2);
  const auto v0 = pv.component(0), v1 = pv.component(1), v2 = pv.component(2);
  auto o0 = out.component(0), o1 = out.component(1), o2 = out.component(2);
  for (std::size_t i = 0; i < o0.size(); ++i) {
    o0[i] = u1[i] * v2[i] - u2[i] * v1[i];
    o1[i] = u2[i] * v0[i] - u0[i] * v2[i];
    o2[i] = u0[i] * v1[i] - u1[i] * v0[i];
  }
  return to_spectral(out);
}

SpectralField advect(const SpectralField& u, const SpectralField& v) {
  require_rank(u, Rank::vector3, "advect");
  require_rank(v, Rank::vector3, "advect");
  require_same_grid(u.grid(), v.grid());
  const RealField pu = to_physical(u);
  const RealField pv = to_physical(v);
  const ModeTable& t = modes(u.grid());
  const std::size_t n = u.grid().band_size();
  SpectralField out(u.grid(), Rank::vector3);
  RealField prod(u.grid(), Rank::scalar);
  auto p = prod.component(0);
  for (int i = 0; i < 3; ++i) {
    auto oi = out.component(i);
    const auto vi = pv.component(i);
    for (int j = 0; j < 3; ++j) {
      const auto uj = pu.component(j);
      for (std::size_t x = 0; x < p.size(); ++x) p[x] = uj[x] * vi[x];
      const SpectralField tij = to_spectral(prod);
      const auto tc = tij.component(0);
      const std::vector<double>& xi = j == 0 ? t.xi1 : (j == 1 ? t.xi2 : t.xi3);
      for (std::size_t m = 0; m < n; ++m) oi[m] += I * xi[m] * tc[m];
    }
  }
  return out;
}

double divergence_ratio(const SpectralField& v) {
  const double norm = l2_norm(v);
  if (norm == 0.0) return 0.0;
  return l2_norm(divergence(v)) / (std::sqrt(v.grid().max_wavenumber_sq()) * norm);
}

}  // namespace hallmhd
