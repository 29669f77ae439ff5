#include "cahcbf/scenario.hpp"

#include <array>
#include <cmath>

#include "cahcbf/rng.hpp"

namespace cahcbf {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxRejections = 100000;

const std::array<KinematicClass, 5> kDefaultMix = {
    KinematicClass::DI, KinematicClass::UNI, KinematicClass::DD, KinematicClass::CL,
    KinematicClass::FO};
}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::CaHcbf: return "cahcbf";
        case Method::ApfTracking: return "apf";
        case Method::ApfHocbf: return "hocbf";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "cahcbf") return Method::CaHcbf;
    if (name == "apf") return Method::ApfTracking;
    if (name == "hocbf") return Method::ApfHocbf;
    throw std::invalid_argument("unknown method: " + name);
}

std::span<const KinematicClass> default_class_mix() {
    return {kDefaultMix.data(), kDefaultMix.size()};
}

Scenario generate_scenario(int n, uint64_t seed, double region_half_width,
                           std::span<const KinematicClass> class_mix) {
    if (n <= 0) {
        throw ScenarioError("scenario: agent count must be positive");
    }
    if (class_mix.empty() || n % static_cast<int>(class_mix.size()) != 0) {
        throw ScenarioError("scenario: agent count must be divisible by the class-mix size");
    }
    SplitMix64 rng(seed);
    const double hw = region_half_width;

    Scenario sc;
    sc.agents.reserve(n);
    std::vector<Vec2> placed_refs;
    std::vector<Vec2> placed_goals;
    int rejections = 0;

    for (int k = 0; k < n; ++k) {
        AgentInit agent;
        agent.spec = KinematicSpec::defaults(class_mix[k % class_mix.size()]);

        for (;;) {
            agent.pos = {rng.uniform(-hw, hw), rng.uniform(-hw, hw)};
            agent.phi = rng.uniform(-kPi, kPi);
            const Vec2 ref =
                reference_point({agent.phi, agent.pos, {0.0, 0.0}}, agent.spec);
            bool ok = true;
            for (const Vec2& other : placed_refs) {
                if (norm(ref - other) < kMinInitialSeparation) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                placed_refs.push_back(ref);
                break;
            }
            if (++rejections > kMaxRejections) {
                throw ScenarioError("scenario: region too dense for the separation constraint");
            }
        }
        // Goals keep the same mutual separation as starts: arrived robots
        // park as static constraint participants, so goals closer than R_ij
        // would be mutually exclusive by construction.
        for (;;) {
            agent.goal = {rng.uniform(-hw, hw), rng.uniform(-hw, hw)};
            bool ok = norm(agent.goal - agent.pos) >= kMinStartGoalDistance;
            for (const Vec2& other : placed_goals) {
                if (!ok || norm(agent.goal - other) < kMinInitialSeparation) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                placed_goals.push_back(agent.goal);
                break;
            }
            if (++rejections > kMaxRejections) {
                throw ScenarioError("scenario: region too small for the goal constraints");
            }
        }
        sc.agents.push_back(agent);
    }
    return sc;
}

}  // namespace cahcbf
