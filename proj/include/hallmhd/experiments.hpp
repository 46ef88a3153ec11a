#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hallmhd/field.hpp"
#include "hallmhd/mild_solver.hpp"

namespace hallmhd {

struct ExperimentResult {
  std::string name;
  std::string parameters;
  double target = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // named finding or failure reason, empty otherwise
  std::vector<std::pair<std::string, double>> details;

  // Optional per-sample table (t or amplitude against measured quantities).
  std::vector<std::string> series_header;
  std::vector<std::vector<double>> series;

  double detail(const std::string& key) const;  // NaN when absent
};

/// name,target,measured,tolerance,pass
void write_summary_csv(std::ostream& os, const std::vector<ExperimentResult>& results);
/// series_header then one row per sample.
void write_series_csv(std::ostream& os, const ExperimentResult& result);

/// Solves from U0 on box L and from lambda U0(lambda x) on box L / lambda (every
/// row scaled by lambda, as the transformation is stated), over [0, T] and
/// [0, T / lambda^2] with the same step count, and reports
/// sup_t |U_lambda(t) - lambda U(lambda^2 t)| / sup_t |lambda U| on the shared lattice.
/// `linear` compares heat flows only. Details: per-row mismatches u, B, J.
/// Throws std::invalid_argument when lambda < 2.
ExperimentResult scaling_experiment(const StateTriple& U0, int lambda, const SolverConfig& config, bool linear = false);

enum class DecayProfile { critical, custom };

/// Linear decay of ||e^{t Lap} u0||_{L^p hat} over R^3 with u0^ = |xi|^-beta
/// (beta = 2 for the critical profile) by radial quadrature on t in [1, 100].
/// target = -(3/p' - beta)/2; measured = fitted log-log slope; details include
/// the relative drift of t^{-target} * norm and the slope's 95% interval.
/// Throws std::invalid_argument when p <= 3 or the profile is not integrable.
ExperimentResult decay_experiment(double p, DecayProfile profile = DecayProfile::critical, double beta = 2.0,
                                  int samples = 21);

/// log-log slope of ||u(t)||_{L^p hat} over the second half of a solver trajectory.
double trajectory_decay_slope(const Trajectory& traj, double p);

enum class ScanMode { picard, coupled };

struct ScanPoint {
  double amplitude = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  bool monotone = true;
  double last_converged = 0.0;  // threshold bracket [last_converged, first_failed]
  double first_failed = 0.0;    // 0 when every amplitude converged
};

/// Runs the chosen solver on amplitude * shape for an increasing ladder.
/// Throws std::invalid_argument when the ladder is not increasing.
ScanResult smallness_scan(const StateTriple& shape, const std::vector<double>& amplitudes, const SolverConfig& config,
                          ScanMode mode = ScanMode::picard);

/// Picard scan plus coupled scans at each final time with the same step count,
/// checking monotonicity in amplitude and that the threshold does not grow with T.
ExperimentResult smallness_experiment(const StateTriple& shape, const std::vector<double>& amplitudes,
                                      const SolverConfig& config, const std::vector<double>& final_times);

/// Gaussian kernel tau-scaling, the Beta convolution identity and the combined
/// exponent, for p > 3. Throws std::invalid_argument otherwise.
ExperimentResult kernel_beta_check(double p);

/// Runs the reformulated system and the original (u, H) system with the same
/// ETD integrator from (u0, B0, curl B0), mapping B = (1 - Lap)^-1 H, J = curl B,
/// and reports the sup-in-time relative mismatch. A mismatch above tolerance is
/// reported in `note` together with the coefficient the data implies.
ExperimentResult formulation_agreement(const SpectralField& u0, const SpectralField& B0, const SolverConfig& config,
                                       double tolerance = 1e-6);

/// Picard, ETD oracle and perturbative solutions compared pairwise.
ExperimentResult solver_agreement(const StateTriple& U0, const SolverConfig& config, double tolerance = 1e-4);

/// Small smooth div-free data: u a Taylor-Green cell, B = (sin x3, sin x1, sin x2),
/// J = curl B, scaled so the largest velocity and field values equal `amplitude`.
StateTriple sample_coupled_data(const Grid3& grid, double amplitude);

}  // namespace hallmhd
