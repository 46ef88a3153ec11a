#include "hallmhd/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace hallmhd {

RealField::RealField(const Grid3& g, Rank r) : grid(g), rank(r), data(g.point_count() * component_count(r), 0.0) {}

std::span<double> RealField::component(int c) {
  const std::size_t np = grid.point_count();
  return {data.data() + static_cast<std::size_t>(c) * np, np};
}

std::span<const double> RealField::component(int c) const {
  const std::size_t np = grid.point_count();
  return {data.data() + static_cast<std::size_t>(c) * np, np};
}

SpectralField::SpectralField(const Grid3& grid, Rank rank)
    : grid_(grid), rank_(rank), coeffs_(grid.band_size() * component_count(rank)) {
  grid_.validate();
}

std::span<const cplx> SpectralField::component(int c) const {
  const std::size_t bs = grid_.band_size();
  return {coeffs_.data() + static_cast<std::size_t>(c) * bs, bs};
}

std::span<cplx> SpectralField::component(int c) {
  const std::size_t bs = grid_.band_size();
  return {coeffs_.data() + static_cast<std::size_t>(c) * bs, bs};
}

cplx SpectralField::coeff(int c, int k1, int k2, int k3) const {
  const int K = grid_.kmax();
  if (std::abs(k1) > K || std::abs(k2) > K || std::abs(k3) > K) return 0.0;
  const std::size_t B = static_cast<std::size_t>(grid_.band());
  const std::size_t idx = (static_cast<std::size_t>(k1 + K) * B + static_cast<std::size_t>(k2 + K)) * B +
                          static_cast<std::size_t>(k3 + K);
  return component(c)[idx];
}

void SpectralField::set_mode(int c, int k1, int k2, int k3, cplx value) {
  const int K = grid_.kmax();
  if (std::abs(k1) > K || std::abs(k2) > K || std::abs(k3) > K)
    throw std::out_of_range("set_mode: wavevector outside the dealiased band");
  const std::size_t B = static_cast<std::size_t>(grid_.band());
  auto index = [&](int a, int b, int d) {
    return (static_cast<std::size_t>(a + K) * B + static_cast<std::size_t>(b + K)) * B + static_cast<std::size_t>(d + K);
  };
  auto comp = component(c);
  if (k1 == 0 && k2 == 0 && k3 == 0) {
    comp[index(0, 0, 0)] = value.real();
    return;
  }
  comp[index(k1, k2, k3)] = value;
  comp[index(-k1, -k2, -k3)] = std::conj(value);
}

void SpectralField::symmetrize() {
  const ModeTable& t = modes(grid_);
  for (int c = 0; c < components(); ++c) {
    auto comp = component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const std::size_t j = t.mirror[i];
      if (i > j) continue;
      const cplx avg = 0.5 * (comp[i] + std::conj(comp[j]));
      comp[i] = avg;
      comp[j] = std::conj(avg);
    }
  }
}

void SpectralField::require_compatible(const SpectralField& o) const {
  require_same_grid(grid_, o.grid_);
  if (rank_ != o.rank_) throw std::invalid_argument("field rank mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

void SpectralField::axpy(double a, const SpectralField& x) {
  require_compatible(x);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
}

SpectralField SpectralField::scalar_component(int c) const {
  if (c < 0 || c >= components()) throw std::out_of_range("scalar_component: bad component index");
  SpectralField s(grid_, Rank::scalar);
  const auto src = component(c);
  std::copy(src.begin(), src.end(), s.coeffs_.begin());
  return s;
}

SpectralField SpectralField::from_components(const SpectralField& a, const SpectralField& b,
                                             const SpectralField& c) {
  require_same_grid(a.grid(), b.grid());
  require_same_grid(a.grid(), c.grid());
  if (a.rank() != Rank::scalar || b.rank() != Rank::scalar || c.rank() != Rank::scalar)
    throw std::invalid_argument("from_components expects three scalar fields");
  SpectralField v(a.grid(), Rank::vector3);
  std::copy(a.coeffs_.begin(), a.coeffs_.end(), v.component(0).begin());
  std::copy(b.coeffs_.begin(), b.coeffs_.end(), v.component(1).begin());
  std::copy(c.coeffs_.begin(), c.coeffs_.end(), v.component(2).begin());
  return v;
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coefficients()) s += std::norm(c);
  return std::sqrt(s * f.grid().volume());
}

double max_coeff(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

double coeff_dot(const SpectralField& a, const SpectralField& b) {
  if (a.coefficients().size() != b.coefficients().size())
    throw std::invalid_argument("coeff_dot: incompatible fields");
  double s = 0.0;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) s += (std::conj(ca[i]) * cb[i]).real();
  return s;
}

double relative_difference(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(l2_norm(a), l2_norm(b));
  if (scale == 0.0) return 0.0;
  return l2_norm(a - b) / scale;
}

SpectralField resample(const SpectralField& f, const Grid3& target) {
  target.validate();
  if (target.box_length != f.grid().box_length) throw std::invalid_argument("resample: box lengths differ");
  SpectralField out(target, f.rank());
  const int K = std::min(f.grid().kmax(), target.kmax());
  const int Kt = target.kmax();
  const std::size_t Bt = static_cast<std::size_t>(target.band());
  for (int c = 0; c < f.components(); ++c) {
    auto dst = out.component(c);
    for (int a = -K; a <= K; ++a)
      for (int b = -K; b <= K; ++b)
        for (int d = -K; d <= K; ++d)
          dst[(static_cast<std::size_t>(a + Kt) * Bt + static_cast<std::size_t>(b + Kt)) * Bt +
              static_cast<std::size_t>(d + Kt)] = f.coeff(c, a, b, d);
  }
  return out;
}

cplx mean_mode(const SpectralField& f, int c) { return f.component(c)[modes(f.grid()).zero_index]; }

SpectralField to_spectral(const RealField& samples) {
  samples.grid.validate();
  if (samples.data.size() != samples.grid.point_count() * static_cast<std::size_t>(samples.components()))
    throw std::invalid_argument("to_spectral: sample count " + std::to_string(samples.data.size()) +
                                " does not match the grid");
  SpectralField f(samples.grid, samples.rank);
  for (int c = 0; c < f.components(); ++c) detail::forward_component(samples.grid, samples.component(c), f.component(c));
  return f;
}

RealField to_physical(const SpectralField& f) {
  RealField r(f.grid(), f.rank());
  for (int c = 0; c < f.components(); ++c) detail::inverse_component(f.grid(), f.component(c), r.component(c));
  return r;
}

StateTriple StateTriple::zero(const Grid3& grid) {
  return {SpectralField(grid, Rank::vector3), SpectralField(grid, Rank::vector3), SpectralField(grid, Rank::vector3)};
}

SpectralField& StateTriple::operator[](int i) {
  switch (i) {
    case 0: return u;
    case 1: return B;
    case 2: return J;
  }
  throw std::out_of_range("StateTriple index");
}

const SpectralField& StateTriple::operator[](int i) const { return const_cast<StateTriple&>(*this)[i]; }

StateTriple& StateTriple::operator+=(const StateTriple& o) {
  u += o.u;
  B += o.B;
  J += o.J;
  return *this;
}

StateTriple& StateTriple::operator-=(const StateTriple& o) {
  u -= o.u;
  B -= o.B;
  J -= o.J;
  return *this;
}

StateTriple& StateTriple::operator*=(double a) {
  u *= a;
  B *= a;
  J *= a;
  return *this;
}

void StateTriple::axpy(double a, const StateTriple& x) {
  u.axpy(a, x.u);
  B.axpy(a, x.B);
  J.axpy(a, x.J);
}

double l2_norm(const StateTriple& s) {
  const double a = l2_norm(s.u), b = l2_norm(s.B), c = l2_norm(s.J);
  return std::sqrt(a * a + b * b + c * c);
}

Trajectory Trajectory::uniform(double T, int steps, const StateTriple& fill) {
  if (!(T > 0.0) || steps < 1) throw std::invalid_argument("trajectory: need T > 0 and at least one step");
  Trajectory t;
  t.times.resize(static_cast<std::size_t>(steps) + 1);
  for (int m = 0; m <= steps; ++m) t.times[static_cast<std::size_t>(m)] = T * m / steps;
  t.states.assign(t.times.size(), fill);
  return t;
}

void Trajectory::validate() const {
  if (states.empty() || states.size() != times.size()) throw std::invalid_argument("trajectory: empty or mismatched");
  if (times.front() != 0.0) throw std::invalid_argument("trajectory: must start at t = 0");
  if (times.size() < 2) return;
  const double h = dt();
  for (std::size_t m = 1; m < times.size(); ++m) {
    const double step = times[m] - times[m - 1];
    if (!(step > 0.0) || std::abs(step - h) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("trajectory: times must be strictly increasing and uniform");
  }
}

double sup_norm(const Trajectory& t) {
  double m = 0.0;
  for (const auto& s : t.states) m = std::max(m, l2_norm(s));
  return m;
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectory size mismatch");
  Trajectory d = a;
  for (std::size_t m = 0; m < d.size(); ++m) d.states[m] -= b.states[m];
  return d;
}

double sup_relative_difference(const Trajectory& a, const Trajectory& b) {
  const double ref = sup_norm(b);
  const double diff = sup_norm(difference(a, b));
  if (ref == 0.0) return diff == 0.0 ? 0.0 : diff / std::max(sup_norm(a), 1e-300);
  return diff / ref;
}

}  // namespace hallmhd
