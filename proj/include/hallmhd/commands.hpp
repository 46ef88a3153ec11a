#pragma once

#include <iosfwd>

#include "hallmhd/run_config.hpp"

namespace hallmhd {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Initial data of the solve, scan and scaling commands.
StateTriple initial_data(const RunConfig& config);

/// Validates `config`, runs its command and writes every artifact under
/// config.out_dir. Progress and notes go to `log`. Returns kExitPass or
/// kExitFailed; throws ConfigError on usage errors.
int run_command(const RunConfig& config, std::ostream& log);

}  // namespace hallmhd
