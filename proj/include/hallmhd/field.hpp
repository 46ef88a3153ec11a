#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd {

using cplx = std::complex<double>;

enum class Rank { scalar = 1, vector3 = 3 };

inline int component_count(Rank r) { return static_cast<int>(r); }

/// Real samples on the n^3 grid, component-major, x1 slowest within a component.
struct RealField {
  Grid3 grid;
  Rank rank = Rank::scalar;
  std::vector<double> data;

  RealField() = default;
  RealField(const Grid3& g, Rank r);

  int components() const { return component_count(rank); }
  std::span<double> component(int c);
  std::span<const double> component(int c) const;
};

/// Fourier coefficients of a real field on the dealiased band of a Grid3.
///
/// Coefficients follow f(x) = sum_k c_k exp(i xi_k . x), so sin(x1) has
/// c_(1,0,0) = -i/2 and c_(-1,0,0) = +i/2. Storage is the full band cube
/// (2 kmax + 1)^3 per component, row-major with k1 slowest.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const Grid3& grid, Rank rank);

  const Grid3& grid() const { return grid_; }
  Rank rank() const { return rank_; }
  int components() const { return component_count(rank_); }
  bool empty() const { return coeffs_.empty(); }

  std::span<const cplx> component(int c) const;
  std::span<cplx> component(int c);
  std::span<const cplx> coefficients() const { return coeffs_; }
  std::span<cplx> coefficients() { return coeffs_; }

  /// Coefficient at integer wavevector k, zero outside the stored band.
  cplx coeff(int c, int k1, int k2, int k3) const;
  /// Sets c_k and c_{-k} = conj(c_k) together.
  void set_mode(int c, int k1, int k2, int k3, cplx value);

  /// Restores exact conjugate symmetry by averaging each (k, -k) pair.
  void symmetrize();

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
  /// this += a * x
  void axpy(double a, const SpectralField& x);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  /// Extracts one component as a scalar field.
  SpectralField scalar_component(int c) const;
  static SpectralField from_components(const SpectralField& a, const SpectralField& b,
                                       const SpectralField& c);

 private:
  void require_compatible(const SpectralField& o) const;

  Grid3 grid_;
  Rank rank_ = Rank::scalar;
  std::vector<cplx> coeffs_;
};

/// L^2 norm over the box, computed by Parseval: (L^3 sum |c_k|^2)^{1/2}.
double l2_norm(const SpectralField& f);
/// Largest coefficient modulus.
double max_coeff(const SpectralField& f);
/// Coefficient-space inner product sum Re(conj(a) b), summed over components.
double coeff_dot(const SpectralField& a, const SpectralField& b);
/// max over components and modes |a - b| / max(|a|, |b|) in the L^2 sense, 0 when both vanish.
double relative_difference(const SpectralField& a, const SpectralField& b);

/// Copies f onto `target` (same box length): shared modes are kept, modes
/// outside the target band are dropped, new modes are zero.
SpectralField resample(const SpectralField& f, const Grid3& target);

/// Mean (xi = 0) coefficient of component c.
cplx mean_mode(const SpectralField& f, int c = 0);

/// Forward transform of physical samples; modes outside the band are dropped.
/// Throws std::invalid_argument if the sample count does not match the grid.
SpectralField to_spectral(const RealField& samples);
/// Inverse transform; the result is real by construction.
RealField to_physical(const SpectralField& f);

/// Samples a callable f(x1, x2, x3) on the grid.
template <class F>
RealField sample_scalar(const Grid3& grid, F&& f) {
  RealField r(grid, Rank::scalar);
  const double h = grid.box_length / grid.n;
  std::size_t idx = 0;
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) r.data[idx++] = f(i * h, j * h, k * h);
  return r;
}

/// Samples a callable returning std::array<double, 3>.
template <class F>
RealField sample_vector(const Grid3& grid, F&& f) {
  RealField r(grid, Rank::vector3);
  const double h = grid.box_length / grid.n;
  const std::size_t np = grid.point_count();
  std::size_t idx = 0;
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k, ++idx) {
        const auto v = f(i * h, j * h, k * h);
        r.data[idx] = v[0];
        r.data[np + idx] = v[1];
        r.data[2 * np + idx] = v[2];
      }
  return r;
}

/// The unknown (u, B, J) of the reformulated system.
struct StateTriple {
  SpectralField u, B, J;

  static StateTriple zero(const Grid3& grid);
  const Grid3& grid() const { return u.grid(); }

  SpectralField& operator[](int i);
  const SpectralField& operator[](int i) const;

  StateTriple& operator+=(const StateTriple& o);
  StateTriple& operator-=(const StateTriple& o);
  StateTriple& operator*=(double a);
  void axpy(double a, const StateTriple& x);
  friend StateTriple operator+(StateTriple a, const StateTriple& b) { return a += b; }
  friend StateTriple operator-(StateTriple a, const StateTriple& b) { return a -= b; }
  friend StateTriple operator*(double s, StateTriple a) { return a *= s; }
};

double l2_norm(const StateTriple& s);

/// Time-indexed StateTriples on a uniform grid 0 = t_0 < ... < t_M = T.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateTriple> states;

  static Trajectory uniform(double T, int steps, const StateTriple& fill);
  std::size_t size() const { return states.size(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  double final_time() const { return times.empty() ? 0.0 : times.back(); }
  const Grid3& grid() const { return states.front().grid(); }

  /// Throws std::invalid_argument unless times are uniform, start at zero and match states.
  void validate() const;
};

/// sup over stored times of the triple L^2 norm.
double sup_norm(const Trajectory& t);
/// sup_t ||a(t) - b(t)|| / sup_t ||b(t)|| (0 when both vanish).
double sup_relative_difference(const Trajectory& a, const Trajectory& b);
Trajectory difference(const Trajectory& a, const Trajectory& b);

}  // namespace hallmhd
