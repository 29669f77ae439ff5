#include "cahcbf/barrier.hpp"

#include <stdexcept>

namespace cahcbf {

double pair_radius(const KinematicSpec& spec_i, const KinematicSpec& spec_j) {
    const double ri = (spec_i.cls == KinematicClass::DI ? 0.0 : spec_i.x_r) + spec_i.r_phys;
    const double rj = (spec_j.cls == KinematicClass::DI ? 0.0 : spec_j.x_r) + spec_j.r_phys;
    return ri + rj;
}

PairGeometry pair_geometry(const AgentState& si, const KinematicSpec& spec_i,
                           const AgentState& sj, const KinematicSpec& spec_j) {
    const OpState oi = op_state(si, spec_i);
    const OpState oj = op_state(sj, spec_j);
    return {pair_radius(spec_i, spec_j), oi.p - oj.p, oi.pdot - oj.pdot};
}

double barrier_value(const PairGeometry& g) { return norm_sq(g.dp) - g.R * g.R; }

double barrier_rate(const PairGeometry& g) { return 2.0 * dot(g.dp, g.dv); }

double barrier_margin(const PairGeometry& g, const CbfGains& gains) {
    return barrier_rate(g) + gains.lambda1 * barrier_value(g);
}

double shared_demand(const PairGeometry& g, const CbfGains& gains) {
    return 2.0 * norm_sq(g.dv) + (gains.lambda1 + gains.lambda2) * barrier_rate(g) +
           gains.lambda1 * gains.lambda2 * barrier_value(g);
}

PairConstraint constraint_row(const AgentState& si, const KinematicSpec& spec_i,
                              const AgentState& sj, const KinematicSpec& spec_j,
                              const CbfGains& gains, double alpha) {
    const PairGeometry g = pair_geometry(si, spec_i, sj, spec_j);
    if (norm(g.dp) < 1e-9) {
        throw std::domain_error("constraint_row: coincident reference points");
    }
    const OpState oi = op_state(si, spec_i);

    PairConstraint row;
    row.h = barrier_value(g);
    row.h_dot = barrier_rate(g);
    row.psi = barrier_margin(g, gains);
    row.upsilon = shared_demand(g, gains);
    row.alpha = alpha;
    row.a = oi.G.tmul(2.0 * g.dp);
    row.b = -2.0 * dot(g.dp, oi.eta) - alpha * row.upsilon;
    return row;
}

}  // namespace cahcbf
