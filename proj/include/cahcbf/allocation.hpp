#pragma once

#include <optional>
#include <span>

#include "cahcbf/opspace.hpp"

namespace cahcbf {

// Responsibility-allocation variants: fixed 1/2 split, capability share
// without feasibility clipping, and the full scheme.
enum class AllocStrategy { Equal, CapabilityOnly, Full };

const char* strategy_name(AllocStrategy s);
AllocStrategy strategy_from_name(const std::string& name);

struct AllocationConfig {
    double epsilon = 1e-6;  // division guard in the progress share
    AllocStrategy strategy = AllocStrategy::Full;
};

struct CapabilityReport {
    double rho = 0.0;      // raw separating capability
    double rho_bar = 0.0;  // effective net capability, clamped at 0
    double sigma = 0.0;    // progress capability, clamped at 0
};

// Support function of a polytope given by its vertices: max over vertices of
// d·u. Exact, since a linear form attains its maximum at a vertex.
// Throws std::domain_error on an empty vertex list.
double support(std::span<const Vec2> vertices, const Vec2& d);

// rho = S(G^T 2dp) over the acceleration set, rho_bar = max(rho + 2dp·eta, 0).
CapabilityReport separating_capability(const OpState& op, std::span<const Vec2> accel_vertices,
                                       const Vec2& dp);
CapabilityReport separating_capability(const AgentState& s, const KinematicSpec& spec,
                                       const Vec2& dp, double dt);

// sigma = max(S(G^T d), 0) with d = pdot_nom - pdot.
double progress_capability(const OpState& op, std::span<const Vec2> accel_vertices,
                           const Vec2& pdot_nom);
double progress_capability(const AgentState& s, const KinematicSpec& spec, const Vec2& pdot_nom,
                           double dt);

// sigma_i / (sigma_i + sigma_j + eps); exactly 1/2 when both sigmas vanish.
double alpha_prog(double sigma_i, double sigma_j, double epsilon);

struct AlphaInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool empty() const { return lo > hi; }
};

// Feasible interval for alpha_ij; only meaningful for upsilon < 0
// (throws std::invalid_argument otherwise).
AlphaInterval alpha_interval(double rho_bar_i, double rho_bar_j, double upsilon);

double alpha_final(double a_prog, const std::optional<AlphaInterval>& interval, double upsilon,
                   AllocStrategy strategy);

// Single-evaluation allocation for the lower-index agent of a pair; the
// other side takes 1 - alpha so the shares sum to one exactly.
double allocate_alpha(double sigma_i, double sigma_j, double rho_bar_i, double rho_bar_j,
                      double upsilon, const AllocationConfig& cfg);

}  // namespace cahcbf
