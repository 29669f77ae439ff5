#include "cahcbf/engine.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cahcbf {

namespace {
constexpr double kDegeneratePairTol = 1e-9;
}

AgentState predicted_state(const AgentState& s, const KinematicSpec& spec, double dt) {
    AgentState p = s;
    if (spec.cls == KinematicClass::DI) {
        p.pos += dt * Vec2{s.nu.v, s.nu.omega};
    } else {
        p.pos.x += dt * s.nu.v * std::cos(s.phi);
        p.pos.y += dt * s.nu.v * std::sin(s.phi);
        p.phi = wrap_angle(s.phi + dt * s.nu.omega);
    }
    return p;
}

const char* status_name(StepStatus s) {
    switch (s) {
        case StepStatus::Init: return "init";
        case StepStatus::Nominal: return "nominal";
        case StepStatus::Solved: return "solved";
        case StepStatus::Infeasible: return "infeasible";
        case StepStatus::Frozen: return "frozen";
    }
    return "?";
}

Engine::Engine(Scenario scenario, SimConfig cfg)
    : cfg_(cfg), violations_(static_cast<int>(scenario.agents.size() * (scenario.agents.size() - 1) / 2)) {
    const int n = static_cast<int>(scenario.agents.size());
    if (n == 0) {
        throw ScenarioError("engine: empty scenario");
    }
    specs_.reserve(n);
    states_.reserve(n);
    goals_.reserve(n);
    for (const AgentInit& a : scenario.agents) {
        a.spec.validate();
        specs_.push_back(a.spec);
        states_.push_back({wrap_angle(a.phi), a.pos, {0.0, 0.0}});
        goals_.push_back(a.goal);
    }
    arrived_.assign(n, 0);
    velocity_sets_.reserve(n);
    for (int i = 0; i < n; ++i) {
        velocity_sets_.push_back(velocity_set(specs_[i]));
    }
    frames_.resize(n);
    pred_.resize(n);
    pairs_.resize(static_cast<size_t>(n) * (n - 1) / 2);
    ref_positions_.resize(n);
    applied_u_.assign(n, Vec2{});
    statuses_.assign(n, StepStatus::Init);

    // Initial frame already counts toward violation bookkeeping.
    for (int i = 0; i < n; ++i) {
        ref_positions_[i] = reference_point(states_[i], specs_[i]);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            violations_.observe(pair_index(i, j), norm(ref_positions_[i] - ref_positions_[j]),
                                pair_radius(specs_[i], specs_[j]));
        }
    }
#ifdef _OPENMP
    if (cfg_.threads > 0) {
        omp_set_num_threads(cfg_.threads);
    }
#endif
}

int Engine::pair_index(int i, int j) const {
    const int n = agent_count();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

bool Engine::all_arrived() const {
    for (uint8_t a : arrived_) {
        if (!a) {
            return false;
        }
    }
    return true;
}

void Engine::mark_arrivals() {
    for (int i = 0; i < agent_count(); ++i) {
        if (arrived_[i]) {
            continue;
        }
        const Vec2 p = reference_point(states_[i], specs_[i]);
        if (norm(p - goals_[i]) <= cfg_.goal_tol) {
            arrived_[i] = 1;
            states_[i].nu = {0.0, 0.0};
        }
    }
}

void Engine::prepare_agent(int i) {
    AgentFrame& f = frames_[i];
    pred_[i] = predicted_state(states_[i], specs_[i], cfg_.dt);
    f.op = op_state(pred_[i], specs_[i]);
    if (arrived_[i]) {
        return;
    }
    if (cfg_.method == Method::CaHcbf) {
        try {
            f.accel = acceleration_set(specs_[i], states_[i].nu, cfg_.dt);
        } catch (const std::exception&) {
            f.accel = Polytope2{};  // degraded; the QP phase falls back to braking
        }
    } else if (cfg_.method == Method::ApfHocbf) {
        f.accel = holonomic_accel_set(specs_[i], op_state(states_[i], specs_[i]).pdot);
    }
}

// Holonomic self-model of the HOCBF baseline: acceleration box plus the
// one-step per-axis speed limit on the operational velocity.
Polytope2 Engine::holonomic_accel_set(const KinematicSpec& spec, const Vec2& pdot) const {
    const double a = spec.a_max;
    const double v = spec.v_max;
    std::vector<HalfSpace> rows = {{{1.0, 0.0}, a}, {{-1.0, 0.0}, a},
                                   {{0.0, 1.0}, a}, {{0.0, -1.0}, a}};
    rows.push_back({{1.0, 0.0}, std::max((v - pdot.x) / cfg_.dt, 0.0)});
    rows.push_back({{-1.0, 0.0}, std::max((v + pdot.x) / cfg_.dt, 0.0)});
    rows.push_back({{0.0, 1.0}, std::max((v - pdot.y) / cfg_.dt, 0.0)});
    rows.push_back({{0.0, -1.0}, std::max((v + pdot.y) / cfg_.dt, 0.0)});
    return Polytope2::from_halfspaces(rows);
}

// Track the filtered operational-space command with the speed and
// heading-rate controllers.
Vec2 Engine::convert_hocbf_command(int i, const Vec2& pdot, const Vec2& op_u) const {
    if (specs_[i].cls == KinematicClass::DI) {
        return op_u;
    }
    const Vec2 pdot_des = pdot + cfg_.dt * op_u;
    const VelocityState des = inverse_velocity_map(states_[i], specs_[i], pdot_des);
    const Vec2 u{cfg_.nominal.k_v * (des.v - states_[i].nu.v),
                 cfg_.nominal.k_phi * (des.omega - states_[i].nu.omega)};
    return acceleration_bounds(specs_[i]).project(u);
}

void Engine::nominal_for_agent(int i) {
    AgentFrame& f = frames_[i];
    f.neighbors.clear();
    for (int j = 0; j < agent_count(); ++j) {
        if (j != i && !(cfg_.arrived_vanish && arrived_[j])) {
            f.neighbors.push_back(ref_positions_[j]);
        }
    }
    f.pdot_nom =
        apf_velocity(ref_positions_[i], goals_[i], f.neighbors, cfg_.nominal, specs_[i].v_max, i);
    if (cfg_.method == Method::ApfHocbf) {
        const Vec2 pdot = op_state(states_[i], specs_[i]).pdot;
        f.u_nom = Polytope2::box(specs_[i].a_max, specs_[i].a_max)
                      .project(cfg_.nominal.k_p * (f.pdot_nom - pdot));
    } else {
        f.u_nom = velocity_to_accel(states_[i], specs_[i], f.pdot_nom, cfg_.nominal);
    }
    if (cfg_.method == Method::CaHcbf && cfg_.alloc.strategy != AllocStrategy::Equal) {
        f.sigma = f.accel.vertices().empty()
                      ? 0.0
                      : progress_capability(f.op, f.accel.vertices(), f.pdot_nom);
    }
}

void Engine::pair_allocation(int i, int j) {
    PairFrame& pf = pairs_[pair_index(i, j)];
    pf = PairFrame{};
    const PairGeometry g = pair_geometry(pred_[i], specs_[i], pred_[j], specs_[j]);
    const double dist = norm(g.dp);
    pf.dist = dist;
    pf.h = barrier_value(g);
    pf.h_dot = barrier_rate(g);
    pf.psi = barrier_margin(g, cfg_.gains);
    pf.upsilon = shared_demand(g, cfg_.gains);
    pf.diag_valid = true;

    if (cfg_.method == Method::ApfTracking) {
        return;
    }
    if (cfg_.arrived_vanish && (arrived_[i] || arrived_[j])) {
        return;
    }
    if ((arrived_[i] && arrived_[j]) || dist < kDegeneratePairTol || dist > cfg_.neighbor_radius) {
        return;
    }
    pf.emit_row = true;
    if (cfg_.method == Method::ApfHocbf || cfg_.alloc.strategy == AllocStrategy::Equal) {
        pf.alpha = 0.5;
    } else {
        // Frozen agents enter the allocation as zero-capability participants:
        // they no longer accelerate, so their sigma and rho_bar vanish and the
        // clipping shifts the burden onto the mover exactly as far as it can
        // actually carry it.
        double rho_bar_i = 0.0;
        double rho_bar_j = 0.0;
        if (cfg_.alloc.strategy == AllocStrategy::Full && pf.upsilon < 0.0) {
            if (!arrived_[i] && !frames_[i].accel.vertices().empty()) {
                rho_bar_i =
                    separating_capability(frames_[i].op, frames_[i].accel.vertices(), g.dp)
                        .rho_bar;
            }
            if (!arrived_[j] && !frames_[j].accel.vertices().empty()) {
                rho_bar_j =
                    separating_capability(frames_[j].op, frames_[j].accel.vertices(), -g.dp)
                        .rho_bar;
            }
        }
        const double sigma_i = arrived_[i] ? 0.0 : frames_[i].sigma;
        const double sigma_j = arrived_[j] ? 0.0 : frames_[j].sigma;
        pf.alpha = allocate_alpha(sigma_i, sigma_j, rho_bar_i, rho_bar_j, pf.upsilon, cfg_.alloc);
    }
}

void Engine::solve_agent(int i) {
    AgentFrame& f = frames_[i];
    if (cfg_.method == Method::ApfTracking) {
        applied_u_[i] = f.u_nom;
        statuses_[i] = StepStatus::Nominal;
        return;
    }
    f.rows.clear();
    for (int j = 0; j < agent_count(); ++j) {
        if (j == i) {
            continue;
        }
        const PairFrame& pf = pairs_[pair_index(std::min(i, j), std::max(i, j))];
        if (!pf.emit_row) {
            continue;
        }
        const double share = i < j ? pf.alpha : 1.0 - pf.alpha;
        const PairConstraint row =
            cfg_.method == Method::ApfHocbf
                ? hocbf_baseline_row(pred_[i], specs_[i], pred_[j], specs_[j], cfg_.gains, share)
                : constraint_row(pred_[i], specs_[i], pred_[j], specs_[j], cfg_.gains, share);
        f.rows.push_back({row.a, row.b});
    }
    if (f.accel.vertices().empty()) {
        applied_u_[i] = braking_input(states_[i], specs_[i], cfg_.dt);
        statuses_[i] = StepStatus::Infeasible;
        return;
    }
    const QpOutcome out = solve(f.u_nom, f.rows, f.accel);
    if (!out.solved()) {
        applied_u_[i] = braking_input(states_[i], specs_[i], cfg_.dt);
        statuses_[i] = StepStatus::Infeasible;
        return;
    }
    statuses_[i] = StepStatus::Solved;
    applied_u_[i] =
        cfg_.method == Method::ApfHocbf
            ? convert_hocbf_command(i, op_state(states_[i], specs_[i]).pdot, out.u)
            : out.u;
}

void Engine::compute_controls_phased() {
    const int n = agent_count();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        prepare_agent(i);
    }
    for (int i = 0; i < n; ++i) {
        ref_positions_[i] = reference_point(states_[i], specs_[i]);
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        if (!arrived_[i]) {
            nominal_for_agent(i);
        }
    }
    const int n_pairs = static_cast<int>(pairs_.size());
    const bool want_pairs = cfg_.method != Method::ApfTracking || observer_ != nullptr;
    if (want_pairs) {
#pragma omp parallel for schedule(static)
        for (int p = 0; p < n_pairs; ++p) {
            // invert the triangular pair index
            int i = 0;
            int rest = p;
            while (rest >= n - 1 - i) {
                rest -= n - 1 - i;
                ++i;
            }
            pair_allocation(i, i + 1 + rest);
        }
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        if (!arrived_[i]) {
            solve_agent(i);
        }
    }
}

void Engine::integrate_and_audit() {
    const int n = agent_count();
    for (int i = 0; i < n; ++i) {
        if (arrived_[i]) {
            applied_u_[i] = {0.0, 0.0};
            statuses_[i] = StepStatus::Frozen;
            continue;
        }
        AgentState& s = states_[i];
        const Vec2 u = applied_u_[i];
        const Vec2 nu_raw{s.nu.v + u.x * cfg_.dt, s.nu.omega + u.y * cfg_.dt};
        const Vec2 nu = velocity_sets_[i].project(nu_raw);
        if (specs_[i].cls == KinematicClass::DI) {
            s.pos += cfg_.dt * nu;
        } else {
            // semi-implicit Euler: new velocity, pose rates at the old heading
            s.pos.x += cfg_.dt * nu.x * std::cos(s.phi);
            s.pos.y += cfg_.dt * nu.x * std::sin(s.phi);
            s.phi = wrap_angle(s.phi + cfg_.dt * nu.y);
        }
        s.nu = {nu.x, nu.y};
    }
    for (int i = 0; i < n; ++i) {
        if (statuses_[i] == StepStatus::Infeasible) {
            ++infeasible_events_;
        }
        ref_positions_[i] = reference_point(states_[i], specs_[i]);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (cfg_.arrived_vanish && (arrived_[i] || arrived_[j])) {
                violations_.observe(pair_index(i, j), 1e9, 0.0);  // departed pair, clear state
                continue;
            }
            violations_.observe(pair_index(i, j), norm(ref_positions_[i] - ref_positions_[j]),
                                pair_radius(specs_[i], specs_[j]));
        }
    }
    if (observer_ != nullptr) {
        for (int i = 0; i < n; ++i) {
            observer_->on_frame(step_, i, states_[i], specs_[i], applied_u_[i], statuses_[i]);
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const PairFrame& pf = pairs_[pair_index(i, j)];
                if (pf.diag_valid) {
                    observer_->on_pair(step_, i, j,
                                       {pf.dist, pf.h, pf.h_dot, pf.psi, pf.upsilon, pf.alpha});
                }
            }
        }
    }
}

void Engine::step() {
    ++step_;
    mark_arrivals();
    if (cfg_.engine == EngineMode::Reference) {
        compute_controls_reference();
    } else {
        compute_controls_phased();
    }
    integrate_and_audit();
}

void Engine::emit_initial_frames() {
    if (observer_ == nullptr) {
        return;
    }
    for (int i = 0; i < agent_count(); ++i) {
        observer_->on_frame(0, i, states_[i], specs_[i], {0.0, 0.0}, StepStatus::Init);
    }
}

TrialMetrics run_trial(const Scenario& scenario, const SimConfig& cfg, TrialObserver* observer) {
    const auto t0 = std::chrono::steady_clock::now();
    Engine eng(scenario, cfg);
    eng.set_observer(observer);
    eng.emit_initial_frames();
    while (eng.step_index() < cfg.max_steps && !eng.all_arrived()) {
        eng.step();
    }

    TrialMetrics m;
    int arrived = 0;
    for (int i = 0; i < eng.agent_count(); ++i) {
        // count robots that reached the goal at any point, including on the
        // final step
        const Vec2 p = reference_point(eng.states()[i], eng.specs()[i]);
        if (eng.arrived(i) || norm(p - eng.goals()[i]) <= cfg.goal_tol) {
            ++arrived;
        }
    }
    m.arrival_rate = static_cast<double>(arrived) / eng.agent_count();
    m.violation_events = eng.violations().events();
    m.mean_violation_depth = eng.violations().mean_depth();
    m.qp_infeasible_events = eng.qp_infeasible_events();
    m.steps_run = eng.step_index();
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

}  // namespace cahcbf
