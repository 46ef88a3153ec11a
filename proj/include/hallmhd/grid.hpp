#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace hallmhd {

/// Cubic periodic grid on [0, box_length)^3 with n samples per axis.
///
/// Wavevectors are xi = (2*pi/box_length) * k with integer k. Only modes with
/// every |k_i| <= kmax() are stored; kmax() is the 2/3-rule cutoff (or the
/// requested fraction of n/2) and never reaches the Nyquist index.
struct Grid3 {
  int n = 32;
  double box_length = 2.0 * std::numbers::pi;
  double dealias_fraction = 2.0 / 3.0;

  /// Throws std::invalid_argument unless n is a power of two >= 4,
  /// box_length > 0 and dealias_fraction is in (0, 1].
  void validate() const;

  int kmax() const;
  int band() const { return 2 * kmax() + 1; }
  std::size_t band_size() const;
  std::size_t point_count() const;

  double dxi() const { return 2.0 * std::numbers::pi / box_length; }
  double cell_volume() const;
  double fourier_cell() const;
  double volume() const { return box_length * box_length * box_length; }
  double max_wavenumber_sq() const;

  friend bool operator==(const Grid3&, const Grid3&) = default;
};

/// Per-grid lookup tables over the stored band, shared by all fields on that grid.
struct ModeTable {
  std::vector<int> k1, k2, k3;
  std::vector<double> xi1, xi2, xi3, xi_sq;
  std::vector<std::size_t> mirror;  // index of -k
  std::size_t zero_index = 0;
};

/// Cached mode table for `grid`. Thread-safe.
const ModeTable& modes(const Grid3& grid);

void require_same_grid(const Grid3& a, const Grid3& b);

}  // namespace hallmhd
