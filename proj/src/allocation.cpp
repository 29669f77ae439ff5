#include "cahcbf/allocation.hpp"

#include <algorithm>
#include <stdexcept>

namespace cahcbf {

const char* strategy_name(AllocStrategy s) {
    switch (s) {
        case AllocStrategy::Equal: return "equal";
        case AllocStrategy::CapabilityOnly: return "cap";
        case AllocStrategy::Full: return "full";
    }
    return "?";
}

AllocStrategy strategy_from_name(const std::string& name) {
    if (name == "equal") return AllocStrategy::Equal;
    if (name == "cap") return AllocStrategy::CapabilityOnly;
    if (name == "full") return AllocStrategy::Full;
    throw std::invalid_argument("unknown allocation strategy: " + name);
}

double support(std::span<const Vec2> vertices, const Vec2& d) {
    if (vertices.empty()) {
        throw std::domain_error("support: empty vertex list");
    }
    double best = dot(d, vertices[0]);
    for (size_t k = 1; k < vertices.size(); ++k) {
        best = std::max(best, dot(d, vertices[k]));
    }
    return best;
}

CapabilityReport separating_capability(const OpState& op, std::span<const Vec2> accel_vertices,
                                       const Vec2& dp) {
    CapabilityReport r;
    r.rho = support(accel_vertices, op.G.tmul(2.0 * dp));
    r.rho_bar = std::max(r.rho + 2.0 * dot(dp, op.eta), 0.0);
    return r;
}

CapabilityReport separating_capability(const AgentState& s, const KinematicSpec& spec,
                                       const Vec2& dp, double dt) {
    const Polytope2 acc = acceleration_set(spec, s.nu, dt);
    return separating_capability(op_state(s, spec), acc.vertices(), dp);
}

double progress_capability(const OpState& op, std::span<const Vec2> accel_vertices,
                           const Vec2& pdot_nom) {
    const Vec2 d = pdot_nom - op.pdot;
    return std::max(support(accel_vertices, op.G.tmul(d)), 0.0);
}

double progress_capability(const AgentState& s, const KinematicSpec& spec, const Vec2& pdot_nom,
                           double dt) {
    const Polytope2 acc = acceleration_set(spec, s.nu, dt);
    return progress_capability(op_state(s, spec), acc.vertices(), pdot_nom);
}

double alpha_prog(double sigma_i, double sigma_j, double epsilon) {
    if (sigma_i + sigma_j == 0.0) {
        return 0.5;
    }
    return sigma_i / (sigma_i + sigma_j + epsilon);
}

AlphaInterval alpha_interval(double rho_bar_i, double rho_bar_j, double upsilon) {
    if (upsilon >= 0.0) {
        throw std::invalid_argument("alpha_interval: demand is nonnegative");
    }
    const double demand = -upsilon;
    return {std::max(0.0, 1.0 - rho_bar_j / demand), std::min(1.0, rho_bar_i / demand)};
}

double alpha_final(double a_prog, const std::optional<AlphaInterval>& interval, double upsilon,
                   AllocStrategy strategy) {
    switch (strategy) {
        case AllocStrategy::Equal:
            return 0.5;
        case AllocStrategy::CapabilityOnly:
            return a_prog;
        case AllocStrategy::Full:
            break;
    }
    if (upsilon >= 0.0) {
        return a_prog;
    }
    if (!interval || interval->empty()) {
        return 0.5;
    }
    return std::clamp(a_prog, interval->lo, interval->hi);
}

double allocate_alpha(double sigma_i, double sigma_j, double rho_bar_i, double rho_bar_j,
                      double upsilon, const AllocationConfig& cfg) {
    const double a_prog = alpha_prog(sigma_i, sigma_j, cfg.epsilon);
    std::optional<AlphaInterval> interval;
    if (cfg.strategy == AllocStrategy::Full && upsilon < 0.0) {
        interval = alpha_interval(rho_bar_i, rho_bar_j, upsilon);
    }
    return alpha_final(a_prog, interval, upsilon, cfg.strategy);
}

}  // namespace cahcbf
