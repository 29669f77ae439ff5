#pragma once

#include "cahcbf/opspace.hpp"

namespace cahcbf {

struct CbfGains {
    double lambda1 = 2.0;  // backstepping gain [1/s]
    double lambda2 = 2.0;  // outer CBF gain [1/s]
};

// Relative geometry of one agent pair at the reference-point level.
struct PairGeometry {
    double R = 0.0;  // pairwise safety distance
    Vec2 dp;         // p_i - p_j
    Vec2 dv;         // pdot_i - pdot_j
};

// One directed constraint row a·u >= b for agent i against agent j, with the
// shared demand and diagnostics carried along for logging.
struct PairConstraint {
    Vec2 a;
    double b = 0.0;
    double upsilon = 0.0;
    double alpha = 0.0;
    double h = 0.0;
    double h_dot = 0.0;
    double psi = 0.0;
};

// R_ij = (x_{r,i} + r_i^phys) + (x_{r,j} + r_j^phys); DI contributes no
// look-ahead offset.
double pair_radius(const KinematicSpec& spec_i, const KinematicSpec& spec_j);

PairGeometry pair_geometry(const AgentState& si, const KinematicSpec& spec_i,
                           const AgentState& sj, const KinematicSpec& spec_j);

// h = |dp|^2 - R^2
double barrier_value(const PairGeometry& g);
// hdot = 2 dp·dv
double barrier_rate(const PairGeometry& g);
// psi = hdot + lambda1 h, the velocity-level safety margin
double barrier_margin(const PairGeometry& g, const CbfGains& gains);
// Upsilon = 2|dv|^2 + (lambda1+lambda2) hdot + lambda1 lambda2 h; symmetric
// in the pair and negative exactly when a separating response is demanded.
double shared_demand(const PairGeometry& g, const CbfGains& gains);

// Decoupled row for agent i carrying share alpha of the demand:
//   a = 2 dp^T G_i,  b = -2 dp·eta_i - alpha Upsilon.
// Throws std::domain_error when the reference points coincide (|dp| < 1e-9):
// the row direction is undefined and the caller should skip the pair.
PairConstraint constraint_row(const AgentState& si, const KinematicSpec& spec_i,
                              const AgentState& sj, const KinematicSpec& spec_j,
                              const CbfGains& gains, double alpha);

}  // namespace cahcbf
