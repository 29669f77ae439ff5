#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cahcbf/allocation.hpp"
#include "cahcbf/barrier.hpp"
#include "cahcbf/nominal.hpp"

namespace cahcbf {

enum class Method { CaHcbf, ApfTracking, ApfHocbf };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Step-loop implementation: Phased runs the OpenMP kernels with per-agent
// caches; Reference is the plain serial loop kept for parity testing and as
// the benchmark baseline. Both produce byte-identical trajectories.
enum class EngineMode { Phased, Reference };

struct SimConfig {
    double dt = 0.05;
    int max_steps = 1000;
    double goal_tol = 0.3;
    CbfGains gains;
    AllocationConfig alloc;
    Method method = Method::CaHcbf;
    NominalConfig nominal;  // nominal.w is the APF trade-off weight
    uint64_t seed = 1;
    int n_agents = 10;
    double region_half_width = 5.5;
    // Constraint-generation cutoff; metrics always consider every pair.
    double neighbor_radius = std::numeric_limits<double>::infinity();
    // When set, arrived robots leave the workspace entirely (no constraints,
    // no repulsion, no violation bookkeeping) instead of parking in place.
    bool arrived_vanish = false;
    EngineMode engine = EngineMode::Phased;
    int threads = 0;  // 0 = OpenMP default
};

struct AgentInit {
    KinematicSpec spec;
    double phi = 0.0;
    Vec2 pos;
    Vec2 goal;
};

struct Scenario {
    std::vector<AgentInit> agents;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kMinStartGoalDistance = 4.0;
inline constexpr double kMinInitialSeparation = 1.5;

std::span<const KinematicClass> default_class_mix();

// Rejection-samples starts and goals uniformly in the square of the given
// half-width until every agent is at least kMinStartGoalDistance from its
// goal and all initial reference points are kMinInitialSeparation apart.
// Deterministic in seed; throws ScenarioError after 1e5 failed draws.
Scenario generate_scenario(int n, uint64_t seed, double region_half_width = 5.5,
                           std::span<const KinematicClass> class_mix = default_class_mix());

}  // namespace cahcbf
