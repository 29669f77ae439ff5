#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cahcbf/engine.hpp"

namespace cahcbf {

// Scenario file schema:
// {
//   "agents": [ { "spec": {"class": "UNI", ...}, "start": [phi, x, y],
//                 "goal": [x, y] } ],
//   "sim":     { "dt": ..., "max_steps": ..., "goal_tol": ..., "method": ...,
//                "alloc": {...}, "gains": {...}, "w": ..., "seed": ..., "N": ... },
//   "nominal": { "w": ..., "k_att": ..., ... }
// }
// Omitted spec keys fall back to the per-class defaults; "sim" and "nominal"
// are optional. "sim.w" and "nominal.w" name the same APF weight.

KinematicSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json spec_to_json(const KinematicSpec& s);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json scenario_to_json(const Scenario& sc);

// Applies the "sim" and "nominal" blocks on top of cfg's current values.
void apply_config_json(const nlohmann::json& j, SimConfig& cfg);

Scenario load_scenario_file(const std::string& path, SimConfig& cfg);
void save_scenario_file(const std::string& path, const Scenario& sc, const SimConfig& cfg);

// Deterministic metrics document: per-trial records plus mean/std aggregates.
// Wall times are deliberately left out so identical seeds give identical
// bytes.
nlohmann::ordered_json metrics_json(const SimConfig& cfg, const std::vector<TrialMetrics>& trials);

// Streams `trial,step,agent,class,phi,x,y,v,omega,u1,u2,qp_status` rows
// (and optionally per-pair diagnostics) with 9-significant-digit floats.
class CsvTrajectoryWriter : public TrialObserver {
public:
    explicit CsvTrajectoryWriter(std::ostream& traj, std::ostream* pairs = nullptr);
    void set_trial(int trial) { trial_ = trial; }

    void on_frame(int step, int agent, const AgentState& s, const KinematicSpec& spec,
                  const Vec2& u, StepStatus status) override;
    void on_pair(int step, int i, int j, const PairDiag& d) override;

private:
    std::ostream& traj_;
    std::ostream* pairs_;
    int trial_ = 0;
};

}  // namespace cahcbf
