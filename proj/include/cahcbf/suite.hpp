#pragma once

#include <vector>

#include "cahcbf/engine.hpp"
#include "cahcbf/io.hpp"

namespace cahcbf {

// Runs n_trials independent trials of one configuration. Trial k samples its
// scenario from seed ^ k, unless a fixed scenario is supplied (then every
// trial replays it). The optional CSV writer receives frames per trial in
// order.
std::vector<TrialMetrics> run_trials(const SimConfig& cfg, int n_trials,
                                     const Scenario* fixed_scenario = nullptr,
                                     CsvTrajectoryWriter* writer = nullptr);

}  // namespace cahcbf
