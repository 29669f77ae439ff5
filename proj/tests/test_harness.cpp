#include "doctest.h"

#include <map>
#include <sstream>

#include "cahcbf/suite.hpp"

using namespace cahcbf;

namespace {
constexpr double kPi = 3.14159265358979323846;

Scenario two_agent_head_on(KinematicClass a, KinematicClass b, double separation) {
    Scenario sc;
    AgentInit ai;
    ai.spec = KinematicSpec::defaults(a);
    ai.pos = {-separation / 2, 0.0};
    ai.phi = 0.0;
    ai.goal = {separation / 2, 0.0};
    AgentInit bj;
    bj.spec = KinematicSpec::defaults(b);
    bj.pos = {separation / 2, 0.0};
    bj.phi = kPi;
    bj.goal = {-separation / 2, 0.0};
    sc.agents = {ai, bj};
    return sc;
}

struct VelocityAdmissibilityAuditor : TrialObserver {
    int bad = 0;
    void on_frame(int, int, const AgentState& s, const KinematicSpec& spec, const Vec2&,
                  StepStatus) override {
        if (!velocity_set(spec).contains({s.nu.v, s.nu.omega}, 1e-6)) {
            ++bad;
        }
    }
};

}  // namespace

TEST_CASE("scenario generation honors the sampling constraints") {
    const Scenario sc = generate_scenario(10, 12345);
    REQUIRE(sc.agents.size() == 10);

    std::map<KinematicClass, int> counts;
    for (const AgentInit& a : sc.agents) {
        ++counts[a.spec.cls];
    }
    CHECK(counts.size() == 5);
    for (const auto& [cls, c] : counts) {
        CHECK(c == 2);
    }
    for (size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentInit& a = sc.agents[i];
        CHECK(norm(a.goal - a.pos) >= kMinStartGoalDistance);
        CHECK(std::abs(a.pos.x) <= 5.5);
        CHECK(std::abs(a.pos.y) <= 5.5);
        const Vec2 ri = reference_point({a.phi, a.pos, {0, 0}}, a.spec);
        for (size_t j = i + 1; j < sc.agents.size(); ++j) {
            const AgentInit& b = sc.agents[j];
            const Vec2 rj = reference_point({b.phi, b.pos, {0, 0}}, b.spec);
            CHECK(norm(ri - rj) >= kMinInitialSeparation);
        }
    }
}

TEST_CASE("scenario generation is deterministic in the seed") {
    const Scenario a = generate_scenario(15, 99);
    const Scenario b = generate_scenario(15, 99);
    REQUIRE(a.agents.size() == b.agents.size());
    for (size_t k = 0; k < a.agents.size(); ++k) {
        CHECK(a.agents[k].pos.x == b.agents[k].pos.x);
        CHECK(a.agents[k].pos.y == b.agents[k].pos.y);
        CHECK(a.agents[k].phi == b.agents[k].phi);
        CHECK(a.agents[k].goal.x == b.agents[k].goal.x);
        CHECK(a.agents[k].goal.y == b.agents[k].goal.y);
    }
}

TEST_CASE("overpacked regions raise a scenario error") {
    CHECK_THROWS_AS(generate_scenario(5, 1, 1.0, std::span<const KinematicClass>(
                                                     &default_class_mix()[0], 1)),
                    ScenarioError);
    CHECK_THROWS_AS(generate_scenario(7, 1), ScenarioError);  // not divisible by 5
}

TEST_CASE("single agent in open space converges monotonically") {
    for (KinematicClass cls :
         {KinematicClass::DI, KinematicClass::UNI, KinematicClass::DD, KinematicClass::CL,
          KinematicClass::FO}) {
        Scenario sc;
        AgentInit a;
        a.spec = KinematicSpec::defaults(cls);
        a.pos = {0.0, 0.0};
        a.phi = 0.0;  // aligned with the goal direction
        a.goal = {5.0, 0.0};
        sc.agents = {a};

        SimConfig cfg;
        cfg.n_agents = 1;
        Engine eng(sc, cfg);
        double prev = norm(reference_point(eng.states()[0], a.spec) - a.goal);
        bool arrived = false;
        for (int s = 0; s < cfg.max_steps && !arrived; ++s) {
            eng.step();
            const double d = norm(reference_point(eng.states()[0], a.spec) - a.goal);
            CHECK(d <= prev + 1e-9);
            prev = d;
            arrived = eng.all_arrived();
        }
        CHECK(arrived);
    }
}

TEST_CASE("two head-on DI agents stay safe under the filter") {
    const Scenario sc = two_agent_head_on(KinematicClass::DI, KinematicClass::DI, 4.0);
    SimConfig cfg;
    cfg.n_agents = 2;
    Engine eng(sc, cfg);
    const double R = pair_radius(sc.agents[0].spec, sc.agents[1].spec);
    const CbfGains gains;

    const Vec2 p0i = sc.agents[0].pos;
    const Vec2 p0j = sc.agents[1].pos;
    const double h0 = norm_sq(p0i - p0j) - R * R;

    bool any_infeasible = false;
    for (int s = 0; s < cfg.max_steps; ++s) {
        eng.step();
        for (StepStatus st : eng.statuses()) {
            if (st == StepStatus::Infeasible) {
                any_infeasible = true;
            }
        }
        const Vec2 pi = reference_point(eng.states()[0], sc.agents[0].spec);
        const Vec2 pj = reference_point(eng.states()[1], sc.agents[1].spec);
        const double dist = norm(pi - pj);
        if (!any_infeasible) {
            CHECK(dist >= R - 1e-6);
            const double h = dist * dist - R * R;
            const double t = (s + 1) * cfg.dt;
            CHECK(h >= h0 * std::exp(-gains.lambda1 * t) - 1e-2);
        }
        if (eng.all_arrived()) {
            break;
        }
    }
    CHECK_FALSE(any_infeasible);
}

TEST_CASE("arrived agents freeze in place") {
    Scenario sc;
    AgentInit a;
    a.spec = KinematicSpec::defaults(KinematicClass::DI);
    a.pos = {0.0, 0.0};
    a.goal = {4.5, 0.0};
    sc.agents = {a};
    SimConfig cfg;
    cfg.n_agents = 1;
    Engine eng(sc, cfg);
    int arrival_step = -1;
    for (int s = 0; s < cfg.max_steps && arrival_step < 0; ++s) {
        eng.step();
        if (eng.all_arrived()) {
            arrival_step = eng.step_index();
        }
    }
    REQUIRE(arrival_step > 0);
    const AgentState frozen = eng.states()[0];
    for (int s = 0; s < 50; ++s) {
        eng.step();
        CHECK(eng.states()[0].pos.x == frozen.pos.x);
        CHECK(eng.states()[0].pos.y == frozen.pos.y);
        CHECK(eng.states()[0].nu.v == 0.0);
        CHECK(eng.states()[0].nu.omega == 0.0);
        CHECK(eng.statuses()[0] == StepStatus::Frozen);
    }
}

TEST_CASE("violation events are maximal contiguous intervals") {
    ViolationTracker t(1);
    const double R = 1.0;
    for (int s = 0; s < 100; ++s) {
        const bool violating = (s >= 10 && s <= 20) || (s >= 50 && s <= 60);
        t.observe(0, violating ? 0.8 : 1.5, R);
    }
    CHECK(t.events() == 2);
    CHECK(t.mean_depth() == doctest::Approx(0.2));

    ViolationTracker clean(3);
    for (int s = 0; s < 100; ++s) {
        clean.observe(s % 3, 2.0, R);
    }
    CHECK(clean.events() == 0);
    CHECK(clean.mean_depth() == 0.0);  // zero depth iff zero events
}

TEST_CASE("velocity admissibility holds on every logged frame") {
    SimConfig cfg;
    cfg.n_agents = 10;
    cfg.seed = 5;
    cfg.max_steps = 300;
    VelocityAdmissibilityAuditor aud;
    const Scenario sc = generate_scenario(cfg.n_agents, cfg.seed);
    run_trial(sc, cfg, &aud);
    CHECK(aud.bad == 0);
}

TEST_CASE("identical seeds give byte-identical outputs, phased or reference") {
    auto render = [](EngineMode mode) {
        SimConfig cfg;
        cfg.n_agents = 10;
        cfg.seed = 17;
        cfg.max_steps = 150;
        cfg.engine = mode;
        std::ostringstream traj;
        std::ostringstream pairs;
        CsvTrajectoryWriter writer(traj, &pairs);
        const std::vector<TrialMetrics> trials = run_trials(cfg, 2, nullptr, &writer);
        return metrics_json(cfg, trials).dump(2) + "\n---\n" + traj.str() + "\n---\n" + pairs.str();
    };
    const std::string a = render(EngineMode::Phased);
    const std::string b = render(EngineMode::Phased);
    CHECK(a == b);
    const std::string c = render(EngineMode::Reference);
    CHECK(a == c);  // the serial reference is bit-identical to the OpenMP path
}

TEST_CASE("methods and strategies run end to end") {
    // smoke: every method/strategy combination completes and reports sane metrics
    for (Method m : {Method::CaHcbf, Method::ApfTracking, Method::ApfHocbf}) {
        SimConfig cfg;
        cfg.method = m;
        cfg.n_agents = 5;
        cfg.seed = 23;
        cfg.max_steps = 120;
        const Scenario sc = generate_scenario(cfg.n_agents, cfg.seed);
        const TrialMetrics t = run_trial(sc, cfg);
        CHECK(t.arrival_rate >= 0.0);
        CHECK(t.arrival_rate <= 1.0);
        CHECK(t.steps_run <= cfg.max_steps);
        CHECK((t.violation_events == 0) == (t.mean_violation_depth == 0.0));
    }
    for (AllocStrategy s :
         {AllocStrategy::Equal, AllocStrategy::CapabilityOnly, AllocStrategy::Full}) {
        SimConfig cfg;
        cfg.alloc.strategy = s;
        cfg.n_agents = 5;
        cfg.seed = 29;
        cfg.max_steps = 120;
        const Scenario sc = generate_scenario(cfg.n_agents, cfg.seed);
        const TrialMetrics t = run_trial(sc, cfg);
        CHECK(t.steps_run > 0);
    }
}
