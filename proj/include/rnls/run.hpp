#pragma once

#include <iosfwd>
#include <string>

#include "rnls/config.hpp"
#include "rnls/ground_state.hpp"

namespace rnls {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIO = 4 };

int exit_code_for(const Error& e);

/// Petviashvili seeded by the config's ground_state widths.
GroundStateResult solve_ground_state(const SimulationConfig& cfg, const AveragedNonlinearity& an);

/// Builds phi_0 from the [initial] section.
SpectralField initial_data(const SimulationConfig& cfg, const AveragedNonlinearity& an);

struct RunOptions {
  bool virial = false;   // append W, Wp, Wpp columns
  bool scatter = false;  // space-time norms and asymptotic profile in the summary
};

/// Evolves, writing diagnostics.csv, checkpoints and summary.json under
/// cfg.output_dir. Returns an ExitCode; errors propagate as exceptions.
int run(const SimulationConfig& cfg, const RunOptions& opts, std::ostream& log);

}  // namespace rnls
