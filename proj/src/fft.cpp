#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace hallmhd::detail {
namespace {

// FFTW plans are created once per n under a lock; execution through the
// new-array interface is thread-safe.
struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

struct Buffers {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  Buffers() = default;
  Buffers(const Buffers&) = delete;
  Buffers& operator=(const Buffers&) = delete;
  ~Buffers() {
    fftw_free(real);
    fftw_free(spec);
  }
};

std::size_t half_size(int n) {
  const auto m = static_cast<std::size_t>(n);
  return m * m * (m / 2 + 1);
}

const Plans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  const std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const auto m = static_cast<std::size_t>(n);
  auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * m * m * m));
  auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half_size(n)));
  Plans p;
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, real, spec, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, spec, real, FFTW_ESTIMATE);
  fftw_free(real);
  fftw_free(spec);
  return cache.emplace(n, p).first->second;
}

Buffers& buffers_for(int n) {
  thread_local std::map<int, std::unique_ptr<Buffers>> local;
  auto& slot = local[n];
  if (!slot) {
    slot = std::make_unique<Buffers>();
    const auto m = static_cast<std::size_t>(n);
    slot->real = static_cast<double*>(fftw_malloc(sizeof(double) * m * m * m));
    slot->spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half_size(n)));
  }
  return *slot;
}

inline std::size_t wrap(int k, int n) { return static_cast<std::size_t>(k < 0 ? k + n : k); }

}  // namespace

void inverse_component(const Grid3& grid, std::span<const cplx> band, std::span<double> out) {
  const int n = grid.n;
  const int K = grid.kmax();
  const std::size_t nh = static_cast<std::size_t>(n / 2 + 1);
  const Plans& p = plans_for(n);
  Buffers& buf = buffers_for(n);
  std::memset(static_cast<void*>(buf.spec), 0, sizeof(fftw_complex) * half_size(n));
  const std::size_t B = static_cast<std::size_t>(grid.band());
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const std::size_t row = (static_cast<std::size_t>(a + K) * B + static_cast<std::size_t>(b + K)) * B;
      const std::size_t dst = (wrap(a, n) * static_cast<std::size_t>(n) + wrap(b, n)) * nh;
      for (int c = 0; c <= K; ++c) {
        const cplx v = band[row + static_cast<std::size_t>(c + K)];
        buf.spec[dst + static_cast<std::size_t>(c)][0] = v.real();
        buf.spec[dst + static_cast<std::size_t>(c)][1] = v.imag();
      }
    }
  fftw_execute_dft_c2r(p.c2r, buf.spec, buf.real);
  std::copy_n(buf.real, grid.point_count(), out.begin());
}

void forward_component(const Grid3& grid, std::span<const double> in, std::span<cplx> band) {
  const int n = grid.n;
  const int K = grid.kmax();
  const std::size_t nh = static_cast<std::size_t>(n / 2 + 1);
  const Plans& p = plans_for(n);
  Buffers& buf = buffers_for(n);
  std::copy(in.begin(), in.end(), buf.real);
  fftw_execute_dft_r2c(p.r2c, buf.real, buf.spec);
  const double scale = 1.0 / static_cast<double>(grid.point_count());
  const std::size_t B = static_cast<std::size_t>(grid.band());
  auto at = [&](int a, int b, int c) {
    const std::size_t src = (wrap(a, n) * static_cast<std::size_t>(n) + wrap(b, n)) * nh + static_cast<std::size_t>(c);
    return cplx(buf.spec[src][0], buf.spec[src][1]) * scale;
  };
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const std::size_t row = (static_cast<std::size_t>(a + K) * B + static_cast<std::size_t>(b + K)) * B;
      for (int c = 1; c <= K; ++c) {
        const cplx v = at(a, b, c);
        band[row + static_cast<std::size_t>(K + c)] = v;
        band[row + static_cast<std::size_t>(K - c)] = 0.0;  // filled from the mirror below
      }
      band[row + static_cast<std::size_t>(K)] = at(a, b, 0);
    }
  // k3 < 0 from conjugate symmetry, k3 = 0 plane averaged with its mirror
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const std::size_t row = (static_cast<std::size_t>(a + K) * B + static_cast<std::size_t>(b + K)) * B;
      const std::size_t mrow = (static_cast<std::size_t>(K - a) * B + static_cast<std::size_t>(K - b)) * B;
      for (int c = 1; c <= K; ++c)
        band[row + static_cast<std::size_t>(K - c)] = std::conj(band[mrow + static_cast<std::size_t>(K + c)]);
    }
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const std::size_t i = (static_cast<std::size_t>(a + K) * B + static_cast<std::size_t>(b + K)) * B + K;
      const std::size_t j = (static_cast<std::size_t>(K - a) * B + static_cast<std::size_t>(K - b)) * B + K;
      if (i > j) continue;
      const cplx avg = 0.5 * (band[i] + std::conj(band[j]));
      band[i] = avg;
      band[j] = std::conj(avg);
    }
}

}  // namespace hallmhd::detail
