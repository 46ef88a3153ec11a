#pragma once

#include <cstdint>

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Seeded band-limited random field: Gaussian coefficients on 0 < |k| <= kcut
/// (integer lattice radius), zero mean mode, rescaled so that
/// ||f||_{L^2} / |box|^{1/2} (the RMS value) equals `rms`.
SpectralField random_field(const Grid3& grid, Rank rank, double kcut, double rms, std::uint64_t seed);

/// As random_field, Leray-projected before rescaling.
SpectralField random_solenoidal(const Grid3& grid, double kcut, double rms, std::uint64_t seed);

/// (u, B, curl B) with u, B random solenoidal fields of the given RMS amplitude.
StateTriple random_coupled_state(const Grid3& grid, double kcut, double rms, std::uint64_t seed);

/// Rescales f to the given RMS value (no-op for the zero field).
SpectralField with_rms(SpectralField f, double rms);

}  // namespace hallmhd
