#include "cahcbf/suite.hpp"

namespace cahcbf {

std::vector<TrialMetrics> run_trials(const SimConfig& cfg, int n_trials,
                                     const Scenario* fixed_scenario, CsvTrajectoryWriter* writer) {
    std::vector<TrialMetrics> out;
    out.reserve(n_trials);
    for (int k = 0; k < n_trials; ++k) {
        const Scenario sc = fixed_scenario != nullptr
                                ? *fixed_scenario
                                : generate_scenario(cfg.n_agents, cfg.seed ^ static_cast<uint64_t>(k),
                                                    cfg.region_half_width);
        if (writer != nullptr) {
            writer->set_trial(k);
        }
        out.push_back(run_trial(sc, cfg, writer));
    }
    return out;
}

}  // namespace cahcbf
