#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hallmhd/field.hpp"

namespace hallmhd {

// HMHD1 snapshot layout (all little-endian):
//   "HMHD1" | u32 rank (1 or 3) | u32 n | f64 box_length |
//   per component: n^3 complex coefficients as (re, im) f64 pairs,
//   k1 slowest, each k_i ascending over [-n/2, n/2).
// Modes outside the dealiased band are written as zeros.

void write_snapshot(std::ostream& os, const SpectralField& f);
void write_snapshot(const std::filesystem::path& path, const SpectralField& f);

/// Reads a snapshot onto a grid with the given dealias fraction. Throws
/// std::runtime_error on a bad magic, truncated data, or nonzero modes
/// outside the band.
SpectralField read_snapshot(std::istream& is, double dealias_fraction = 2.0 / 3.0);
SpectralField read_snapshot(const std::filesystem::path& path, double dealias_fraction = 2.0 / 3.0);

/// Writes u/B/J snapshots per stored time (u_0000.hmhd, ...) plus manifest.txt
/// holding the time grid and the `config_echo` key = value lines.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                      const std::vector<std::pair<std::string, std::string>>& config_echo);

}  // namespace hallmhd
