#pragma once

#include <span>

#include "cahcbf/barrier.hpp"
#include "cahcbf/opspace.hpp"

namespace cahcbf {

struct NominalConfig {
    double w = 0.9;       // attraction/repulsion trade-off in [0, 1]
    double k_att = 1.0;   // attractive gain [1/s]
    double k_rep = 32.0;  // repulsive gain [m^4/s]
    double d_cut = 1.5;   // repulsion cutoff radius [m]
    double k_p = 2.0;     // operational-space velocity tracking gain [1/s]
    double k_v = 2.0;     // forward-speed tracking gain [1/s]
    double k_phi = 4.0;   // angular-rate tracking gain [1/s]
};

// Decentralized APF in the operational space:
//   pdot_nom = w f_att + (1-w) f_rep, saturated to |pdot_nom| <= v_max,
// with attraction k_att (goal - p) saturated to v_max and repulsion from
// each neighbor within d_cut of magnitude k_rep / d^3. agent_index seeds the
// deterministic push-away direction for coincident neighbors.
Vec2 apf_velocity(const Vec2& p, const Vec2& goal, std::span<const Vec2> neighbor_positions,
                  const NominalConfig& cfg, double v_max, int agent_index);

// Proportional conversion of a desired operational-space velocity into a
// nominal generalized acceleration, clamped into the acceleration bounds.
// DI tracks pdot directly; the wheeled classes track J^{-1} pdot_nom with
// separate speed and heading-rate gains.
Vec2 velocity_to_accel(const AgentState& s, const KinematicSpec& spec, const Vec2& pdot_nom,
                       const NominalConfig& cfg);

// Constraint row of the holonomic-assumption HOCBF baseline: same backstepping
// demand, but built with G = I and the rotation drift neglected.
PairConstraint hocbf_baseline_row(const AgentState& si, const KinematicSpec& spec_i,
                                  const AgentState& sj, const KinematicSpec& spec_j,
                                  const CbfGains& gains, double alpha = 0.5);

}  // namespace cahcbf
