#pragma once

#include <string>

#include "htsgd/core/random_stream.hpp"
#include "htsgd/optimizers/trajectory.hpp"

namespace htsgd {

enum class OutputStrategy { last, simple_average, weighted_average, uniform_random };

std::string to_string(OutputStrategy s);
/// Throws ConfigError on an unknown name.
OutputStrategy parse_output_strategy(const std::string& name);

/// Substream tag reserved for output selection.
inline constexpr std::uint64_t kOutputSelectionTag = 0x6f7574707574ull;

/// Reported point of a run. Averages and sampling range over the iterates
/// x_1..x_T at which the T oracle calls were made, weighted by eta_t for
/// weighted_average; `last` is the final iterate x_{T+1}. The uniform index is
/// drawn from `rng` (callers pass a substream so that the noise sequence is
/// never touched).
Vector select_output(const Trajectory& traj, OutputStrategy strategy, RandomStream& rng);

/// Output after the first `prefix` steps, i.e. as if the run had stopped at
/// T = prefix.
Vector select_output_prefix(const Trajectory& traj, long prefix, OutputStrategy strategy,
                            RandomStream& rng);

}  // namespace htsgd
