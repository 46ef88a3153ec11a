#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hallmhd/field.hpp"

namespace hallmhd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smooth transition: 1 for x <= 0, 0 for x >= 1, built from exp(-1/x).
double smooth_step(double x);
/// Low-frequency cutoff: 1 on [0, 3/4], 0 from 1 on.
double low_profile(double r);
/// Annulus cutoff low_profile(r/2) - low_profile(r), supported in (3/4, 2).
double block_profile(double r);

/// Radial cutoffs sampled on a grid's stored modes for blocks j_min..j_max.
struct DyadicPartition {
  Grid3 grid;
  int j_min = 0;
  int j_max = -1;
  std::vector<double> psi;      // low_profile(|xi|) per mode
  std::vector<double> weights;  // block_profile(2^-j |xi|), block-major

  int block_count() const { return j_max - j_min + 1; }
  bool contains(int j) const { return j >= j_min && j <= j_max; }
  /// Weights of block j. Throws std::out_of_range outside [j_min, j_max].
  std::span<const double> phi(int j) const;

  /// max over xi != 0 of |sum_j phi_j - 1|.
  double homogeneous_residual() const;
  /// max over all xi of |psi + sum_{q >= 0} phi(2^-q xi) - 1|.
  double inhomogeneous_residual() const;
};

/// Blocks covering every nonzero lattice shell. Throws std::invalid_argument
/// when fewer than three blocks are active.
DyadicPartition build_partition(const Grid3& grid);

/// Delta_j f. Throws std::out_of_range when j is outside the partition.
SpectralField dyadic_block(const DyadicPartition& part, const SpectralField& f, int j);
/// S_j f = sum_{k < j} Delta_k f; the mean mode is not included.
SpectralField low_pass(const DyadicPartition& part, const SpectralField& f, int j);

struct BonyParts {
  SpectralField paraproduct_uv;  // T_u v, carries u0 * v
  SpectralField paraproduct_vu;  // T_v u, carries v0 * (u - u0)
  SpectralField remainder;       // R(u, v)
};

/// uv = T_u v + T_v u + R(u, v) with the mean modes booked as noted above.
/// Vector fields are decomposed componentwise (u_i v_i).
BonyParts bony_decompose(const DyadicPartition& part, const SpectralField& u, const SpectralField& v);

enum class NormFamily { besov, chemin_lerner, kato, kato_herz, fourier_herz, lp_hat };

NormFamily parse_norm_family(const std::string& name);
std::string to_string(NormFamily f);
bool is_time_family(NormFamily f);

/// Exponents may be kInf. For kato and kato_herz, s holds sigma.
struct NormSpec {
  NormFamily family = NormFamily::besov;
  double s = 0.0;
  double p = 2.0;
  double r = 2.0;
  double rho = 1.0;

  /// Throws std::invalid_argument unless p, r, rho lie in [1, inf].
  void validate() const;
  std::string describe() const;
};

struct NormReport {
  double value = 0.0;
  std::vector<std::pair<int, double>> per_block;  // (j, 2^{js} * block norm)
};

/// Fields sampled at increasing times (the input of the time families).
struct FieldSeries {
  std::vector<double> times;
  std::vector<SpectralField> fields;
};

/// Series of one row of a trajectory (0 = u, 1 = B, 2 = J).
FieldSeries row_series(const Trajectory& traj, int row);

double conjugate_exponent(double p);
/// ||f||_{L^p} by quadrature over the grid points; Parseval for p = 2.
double lp_norm(const SpectralField& f, double p);
/// ||f^||_{L^q} with f^(xi_k) = L^3 c_k and lattice cell (2 pi / L)^3.
double fourier_lp_norm(const SpectralField& f, double q);
/// ||f||_{L^p hat} = ||f^||_{L^{p'}}.
inline double lp_hat_norm(const SpectralField& f, double p) { return fourier_lp_norm(f, conjugate_exponent(p)); }

/// Spatial families (besov, fourier_herz, lp_hat). Time families throw std::invalid_argument.
NormReport compute_norm(const NormSpec& spec, const DyadicPartition& part, const SpectralField& f);
/// Time families (chemin_lerner, kato, kato_herz). Spatial families throw std::invalid_argument.
NormReport compute_norm(const NormSpec& spec, const DyadicPartition& part, const FieldSeries& series);
/// Sum of the norms of the u, B and J rows.
NormReport compute_norm(const NormSpec& spec, const DyadicPartition& part, const Trajectory& traj);

/// Time exponents whose maximum defines the intersection norm below.
inline constexpr double kScriptLExponents[5] = {1.0, 4.0 / 3.0, 2.0, 4.0, kInf};
/// max over rho of the Chemin-Lerner norm with regularity s + 2/rho.
double intersection_norm(const DyadicPartition& part, const FieldSeries& series, double s, double p, double r);

/// sup_t t^{-s/2} ||e^{t Lap} f||_{L^p} over `times`, divided by ||f||_{B^s_{p,inf}}.
double heat_characterization_ratio(const DyadicPartition& part, const SpectralField& f, double s, double p,
                                   const std::vector<double>& times);
/// Log-spaced times resolving every heat scale of the grid.
std::vector<double> heat_time_grid(const Grid3& grid, int per_decade = 8);

struct InequalityCorpus {
  std::vector<SpectralField> fields;
  std::vector<FieldSeries> series;  // scalar heat flows, consumed in pairs by the product check
};

/// Shell-k fields, random band-limited scalars and vectors, and heat-flow series.
InequalityCorpus default_corpus(const Grid3& grid, std::uint64_t seed);

struct InequalityRow {
  std::string name;
  std::string parameters;
  double constant = 0.0;  // largest measured ratio on the partition's grid
  double refined = 0.0;   // same on the twice finer grid
  bool pass = false;      // finite and stable under refinement
};

/// Relative change allowed between a constant and its refined value.
inline constexpr double kRefinementTolerance = 0.1;

/// Bernstein, embedding, Minkowski, multiplier, heat-characterization and
/// product checks over the corpus, each on the grid and on its refinement.
std::vector<InequalityRow> inequality_suite(const DyadicPartition& part, const InequalityCorpus& corpus);

/// Per-block constants for (1-Lap)^-1 curl against 2^j / (1 + 4^j) and for
/// Lap (1-Lap)^-1 against 4^j / (1 + 4^j); first = curl row, second = Laplacian row.
std::pair<double, double> multiplier_constants(const DyadicPartition& part, const SpectralField& f, double p);

/// name,parameters,value,pass rows (value = measured constant or norm).
void write_inequality_csv(std::ostream& os, const std::vector<InequalityRow>& rows);

}  // namespace hallmhd
