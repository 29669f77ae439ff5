#include "cahcbf/nominal.hpp"

#include <cmath>
#include <stdexcept>

namespace cahcbf {

namespace {

constexpr double kGoldenAngle = 2.39996322972865332;  // 2*pi*(2 - golden ratio)

Vec2 saturate(const Vec2& v, double cap) {
    const double len = norm(v);
    if (len <= cap || len == 0.0) {
        return v;
    }
    return v * (cap / len);
}

}  // namespace

Vec2 apf_velocity(const Vec2& p, const Vec2& goal, std::span<const Vec2> neighbor_positions,
                  const NominalConfig& cfg, double v_max, int agent_index) {
    // Only the blended command is saturated; this keeps agents cruising at
    // v_max in open space instead of at w * v_max.
    const Vec2 f_att = cfg.k_att * (goal - p);
    Vec2 f_rep{0.0, 0.0};
    for (const Vec2& q : neighbor_positions) {
        const Vec2 away = p - q;
        const double d = norm(away);
        if (d >= cfg.d_cut) {
            continue;
        }
        if (d < 1e-9) {
            const double theta = agent_index * kGoldenAngle;
            f_rep += v_max * Vec2{std::cos(theta), std::sin(theta)};
            continue;
        }
        f_rep += (cfg.k_rep / (d * d * d * d)) * away;
    }
    return saturate(cfg.w * f_att + (1.0 - cfg.w) * f_rep, v_max);
}

Vec2 velocity_to_accel(const AgentState& s, const KinematicSpec& spec, const Vec2& pdot_nom,
                       const NominalConfig& cfg) {
    Vec2 u;
    if (spec.cls == KinematicClass::DI) {
        u = cfg.k_p * (pdot_nom - Vec2{s.nu.v, s.nu.omega});
    } else {
        const VelocityState des = inverse_velocity_map(s, spec, pdot_nom);
        u = {cfg.k_v * (des.v - s.nu.v), cfg.k_phi * (des.omega - s.nu.omega)};
    }
    return acceleration_bounds(spec).project(u);
}

PairConstraint hocbf_baseline_row(const AgentState& si, const KinematicSpec& spec_i,
                                  const AgentState& sj, const KinematicSpec& spec_j,
                                  const CbfGains& gains, double alpha) {
    const PairGeometry g = pair_geometry(si, spec_i, sj, spec_j);
    if (norm(g.dp) < 1e-9) {
        throw std::domain_error("hocbf_baseline_row: coincident reference points");
    }
    PairConstraint row;
    row.h = barrier_value(g);
    row.h_dot = barrier_rate(g);
    row.psi = barrier_margin(g, gains);
    row.upsilon = shared_demand(g, gains);
    row.alpha = alpha;
    row.a = 2.0 * g.dp;
    row.b = -alpha * row.upsilon;
    return row;
}

}  // namespace cahcbf
