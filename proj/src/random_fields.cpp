#include "hallmhd/random_fields.hpp"

#include <cmath>
#include <random>

#include "hallmhd/operators.hpp"

namespace hallmhd {

SpectralField with_rms(SpectralField f, double rms) {
  const double norm = l2_norm(f);
  if (norm == 0.0) return f;
  f *= rms * std::sqrt(f.grid().volume()) / norm;
  return f;
}

SpectralField random_field(const Grid3& grid, Rank rank, double kcut, double rms, std::uint64_t seed) {
  SpectralField f(grid, rank);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const ModeTable& t = modes(grid);
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const double k2 = double(t.k1[i]) * t.k1[i] + double(t.k2[i]) * t.k2[i] + double(t.k3[i]) * t.k3[i];
      // draw for every mode so the stream does not depend on kcut
      const double re = normal(gen);
      const double im = normal(gen);
      if (i == t.zero_index || k2 > kcut * kcut) continue;
      comp[i] = cplx(re, im);
    }
  }
  f.symmetrize();
  return with_rms(std::move(f), rms);
}

SpectralField random_solenoidal(const Grid3& grid, double kcut, double rms, std::uint64_t seed) {
  return with_rms(leray_project(random_field(grid, Rank::vector3, kcut, 1.0, seed)), rms);
}

StateTriple random_coupled_state(const Grid3& grid, double kcut, double rms, std::uint64_t seed) {
  StateTriple s;
  s.u = random_solenoidal(grid, kcut, rms, seed);
  s.B = random_solenoidal(grid, kcut, rms, seed ^ 0x9e3779b97f4a7c15ULL);
  s.J = curl(s.B);
  return s;
}

}  // namespace hallmhd
