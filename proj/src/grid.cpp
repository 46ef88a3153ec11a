#include "hallmhd/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hallmhd {

void Grid3::validate() const {
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid: n must be a power of two >= 4, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("grid: box_length must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw std::invalid_argument("grid: dealias_fraction must lie in (0, 1]");
  if (kmax() < 1) throw std::invalid_argument("grid: dealiased band holds no nonzero mode");
}

int Grid3::kmax() const {
  const int k = static_cast<int>(std::floor(dealias_fraction * n / 2.0 + 1e-12));
  return std::min(k, n / 2 - 1);
}

std::size_t Grid3::band_size() const {
  const auto b = static_cast<std::size_t>(band());
  return b * b * b;
}

std::size_t Grid3::point_count() const {
  const auto m = static_cast<std::size_t>(n);
  return m * m * m;
}

double Grid3::cell_volume() const {
  const double h = box_length / n;
  return h * h * h;
}

double Grid3::fourier_cell() const {
  const double d = dxi();
  return d * d * d;
}

double Grid3::max_wavenumber_sq() const {
  const double k = kmax() * dxi();
  return 3.0 * k * k;
}

namespace {

ModeTable build_table(const Grid3& grid) {
  ModeTable t;
  const int K = grid.kmax();
  const int B = grid.band();
  const std::size_t size = grid.band_size();
  const double d = grid.dxi();
  t.k1.resize(size);
  t.k2.resize(size);
  t.k3.resize(size);
  t.xi1.resize(size);
  t.xi2.resize(size);
  t.xi3.resize(size);
  t.xi_sq.resize(size);
  t.mirror.resize(size);
  std::size_t idx = 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K; c <= K; ++c, ++idx) {
        t.k1[idx] = a;
        t.k2[idx] = b;
        t.k3[idx] = c;
        t.xi1[idx] = d * a;
        t.xi2[idx] = d * b;
        t.xi3[idx] = d * c;
        t.xi_sq[idx] = t.xi1[idx] * t.xi1[idx] + t.xi2[idx] * t.xi2[idx] + t.xi3[idx] * t.xi3[idx];
        t.mirror[idx] = (static_cast<std::size_t>(K - a) * B + static_cast<std::size_t>(K - b)) * B +
                        static_cast<std::size_t>(K - c);
        if (a == 0 && b == 0 && c == 0) t.zero_index = idx;
      }
  return t;
}

}  // namespace

const ModeTable& modes(const Grid3& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int>, std::unique_ptr<ModeTable>> cache;
  const std::lock_guard lock(mutex);
  // the table depends on kmax and the lattice spacing only
  auto key = std::make_tuple(grid.n, grid.box_length, grid.kmax());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<ModeTable>(build_table(grid))).first;
  return *it->second;
}

void require_same_grid(const Grid3& a, const Grid3& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace hallmhd
