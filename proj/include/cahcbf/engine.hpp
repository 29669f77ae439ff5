#pragma once

#include <cstdint>
#include <vector>

#include "cahcbf/qpsolve.hpp"
#include "cahcbf/scenario.hpp"

namespace cahcbf {

enum class StepStatus : uint8_t { Init, Nominal, Solved, Infeasible, Frozen };

const char* status_name(StepStatus s);

struct TrialMetrics {
    double arrival_rate = 0.0;
    long violation_events = 0;
    double mean_violation_depth = 0.0;
    long qp_infeasible_events = 0;
    int steps_run = 0;
    double wall_time_s = 0.0;  // console diagnostics only; never serialized
};

struct PairDiag {
    double dist = 0.0;
    double h = 0.0;
    double h_dot = 0.0;
    double psi = 0.0;
    double upsilon = 0.0;
    double alpha = 0.0;  // lower-index agent's share
};

// Streaming consumer of trajectory frames and optional per-pair diagnostics.
// Emissions are always in deterministic (step, agent) / (step, i, j) order.
class TrialObserver {
public:
    virtual ~TrialObserver() = default;
    virtual void on_frame(int /*step*/, int /*agent*/, const AgentState&, const KinematicSpec&,
                          const Vec2& /*u*/, StepStatus) {}
    virtual void on_pair(int /*step*/, int /*i*/, int /*j*/, const PairDiag&) {}
};

// Per-pair violation bookkeeping: an event is a maximal contiguous run of
// steps with dist < R, the depth average runs over violating samples.
class ViolationTracker {
public:
    explicit ViolationTracker(int n_pairs) : active_(n_pairs, 0) {}

    void observe(int pair_index, double dist, double R) {
        if (dist < R) {
            if (!active_[pair_index]) {
                active_[pair_index] = 1;
                ++events_;
            }
            depth_sum_ += R - dist;
            ++samples_;
        } else {
            active_[pair_index] = 0;
        }
    }

    long events() const { return events_; }
    double mean_depth() const { return samples_ == 0 ? 0.0 : depth_sum_ / samples_; }

private:
    std::vector<uint8_t> active_;
    long events_ = 0;
    double depth_sum_ = 0.0;
    long samples_ = 0;
};

// One-step constant-velocity extrapolation of the configuration. The engine
// evaluates all safety constraints at this predicted geometry: a zero-order
// hold on the step-start state leaves the enforced boundary sitting slightly
// inside R during boundary riding, while the lookahead keeps it outside.
AgentState predicted_state(const AgentState& s, const KinematicSpec& spec, double dt);

// Synchronous multi-agent simulation. Each step runs the four phases
// (nominal, allocation, QP, integration) against the previous step's frozen
// snapshot; EngineMode selects the OpenMP kernels or the serial reference.
class Engine {
public:
    Engine(Scenario scenario, SimConfig cfg);

    void step();
    bool all_arrived() const;
    int step_index() const { return step_; }
    int agent_count() const { return static_cast<int>(states_.size()); }

    const std::vector<AgentState>& states() const { return states_; }
    const std::vector<KinematicSpec>& specs() const { return specs_; }
    const std::vector<Vec2>& goals() const { return goals_; }
    const std::vector<Vec2>& applied_inputs() const { return applied_u_; }
    const std::vector<StepStatus>& statuses() const { return statuses_; }
    bool arrived(int i) const { return arrived_[i] != 0; }

    long qp_infeasible_events() const { return infeasible_events_; }
    const ViolationTracker& violations() const { return violations_; }

    void set_observer(TrialObserver* obs) { observer_ = obs; }
    void emit_initial_frames();

private:
    struct AgentFrame {
        OpState op;
        Polytope2 accel;
        std::vector<Vec2> neighbors;
        std::vector<QpRow> rows;
        Vec2 pdot_nom;
        Vec2 u_nom;
        double sigma = 0.0;
    };
    struct PairFrame {
        double upsilon = 0.0;
        double alpha = 0.5;
        double dist = 0.0;
        double h = 0.0;
        double h_dot = 0.0;
        double psi = 0.0;
        bool emit_row = false;
        bool diag_valid = false;
    };

    int pair_index(int i, int j) const;  // requires i < j
    void mark_arrivals();
    void compute_controls_phased();
    void compute_controls_reference();
    void prepare_agent(int i);
    void nominal_for_agent(int i);
    void pair_allocation(int i, int j);
    void solve_agent(int i);
    void integrate_and_audit();
    Polytope2 holonomic_accel_set(const KinematicSpec& spec, const Vec2& pdot) const;
    Vec2 convert_hocbf_command(int i, const Vec2& pdot, const Vec2& op_u) const;

    SimConfig cfg_;
    std::vector<KinematicSpec> specs_;
    std::vector<AgentState> states_;
    std::vector<AgentState> pred_;
    std::vector<Vec2> goals_;
    std::vector<uint8_t> arrived_;
    std::vector<Polytope2> velocity_sets_;

    std::vector<AgentFrame> frames_;
    std::vector<PairFrame> pairs_;
    std::vector<Vec2> ref_positions_;
    std::vector<Vec2> applied_u_;
    std::vector<StepStatus> statuses_;

    ViolationTracker violations_;
    long infeasible_events_ = 0;
    int step_ = 0;
    TrialObserver* observer_ = nullptr;
};

// Runs a trial to total arrival or cfg.max_steps and assembles the metrics.
TrialMetrics run_trial(const Scenario& scenario, const SimConfig& cfg,
                       TrialObserver* observer = nullptr);

}  // namespace cahcbf
