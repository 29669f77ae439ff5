#include <cmath>
#include <stdexcept>

#include "cahcbf/engine.hpp"

namespace cahcbf {

// Plain serial control computation, kept as the reference the parallel
// phased kernels are tested and benchmarked against. Everything is
// recomputed per use through the module-level entry points; no per-step
// caches. Produces byte-identical trajectories.
void Engine::compute_controls_reference() {
    const int n = agent_count();
    std::vector<AgentState> pred(n);
    for (int i = 0; i < n; ++i) {
        ref_positions_[i] = reference_point(states_[i], specs_[i]);
        pred[i] = predicted_state(states_[i], specs_[i], cfg_.dt);
    }

    std::vector<Vec2> pdot_nom(n);
    std::vector<Vec2> u_nom(n);
    std::vector<double> sigma(n, 0.0);
    std::vector<Vec2> neighbors;
    for (int i = 0; i < n; ++i) {
        if (arrived_[i]) {
            continue;
        }
        neighbors.clear();
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                neighbors.push_back(ref_positions_[j]);
            }
        }
        pdot_nom[i] =
            apf_velocity(ref_positions_[i], goals_[i], neighbors, cfg_.nominal, specs_[i].v_max, i);
        if (cfg_.method == Method::ApfHocbf) {
            const Vec2 pdot = op_state(states_[i], specs_[i]).pdot;
            u_nom[i] = Polytope2::box(specs_[i].a_max, specs_[i].a_max)
                           .project(cfg_.nominal.k_p * (pdot_nom[i] - pdot));
        } else {
            u_nom[i] = velocity_to_accel(states_[i], specs_[i], pdot_nom[i], cfg_.nominal);
        }
        if (cfg_.method == Method::CaHcbf && cfg_.alloc.strategy != AllocStrategy::Equal) {
            try {
                sigma[i] = progress_capability(pred[i], specs_[i], pdot_nom[i], cfg_.dt);
            } catch (const std::exception&) {
                sigma[i] = 0.0;
            }
        }
    }

    const bool want_pairs = cfg_.method != Method::ApfTracking || observer_ != nullptr;
    if (want_pairs) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                PairFrame& pf = pairs_[pair_index(i, j)];
                pf = PairFrame{};
                const PairGeometry g = pair_geometry(pred[i], specs_[i], pred[j], specs_[j]);
                const double dist = norm(g.dp);
                pf.dist = dist;
                pf.h = barrier_value(g);
                pf.h_dot = barrier_rate(g);
                pf.psi = barrier_margin(g, cfg_.gains);
                pf.upsilon = shared_demand(g, cfg_.gains);
                pf.diag_valid = true;
                if (cfg_.method == Method::ApfTracking) {
                    continue;
                }
                if ((arrived_[i] && arrived_[j]) || dist < 1e-9 || dist > cfg_.neighbor_radius) {
                    continue;
                }
                pf.emit_row = true;
                if (cfg_.method == Method::ApfHocbf ||
                    cfg_.alloc.strategy == AllocStrategy::Equal) {
                    pf.alpha = 0.5;
                } else {
                    double rho_bar_i = 0.0;
                    double rho_bar_j = 0.0;
                    if (cfg_.alloc.strategy == AllocStrategy::Full && pf.upsilon < 0.0) {
                        if (!arrived_[i]) {
                            try {
                                rho_bar_i = separating_capability(pred[i], specs_[i], g.dp,
                                                                  cfg_.dt)
                                                .rho_bar;
                            } catch (const std::exception&) {
                            }
                        }
                        if (!arrived_[j]) {
                            try {
                                rho_bar_j = separating_capability(pred[j], specs_[j], -g.dp,
                                                                  cfg_.dt)
                                                .rho_bar;
                            } catch (const std::exception&) {
                            }
                        }
                    }
                    const double sigma_i = arrived_[i] ? 0.0 : sigma[i];
                    const double sigma_j = arrived_[j] ? 0.0 : sigma[j];
                    pf.alpha = allocate_alpha(sigma_i, sigma_j, rho_bar_i, rho_bar_j, pf.upsilon,
                                              cfg_.alloc);
                }
            }
        }
    }

    std::vector<QpRow> rows;
    for (int i = 0; i < n; ++i) {
        if (arrived_[i]) {
            continue;
        }
        if (cfg_.method == Method::ApfTracking) {
            applied_u_[i] = u_nom[i];
            statuses_[i] = StepStatus::Nominal;
            continue;
        }
        rows.clear();
        for (int j = 0; j < n; ++j) {
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
                    ? hocbf_baseline_row(pred[i], specs_[i], pred[j], specs_[j], cfg_.gains,
                                         share)
                    : constraint_row(pred[i], specs_[i], pred[j], specs_[j], cfg_.gains, share);
            rows.push_back({row.a, row.b});
        }
        Polytope2 bounds;
        bool degraded = false;
        try {
            bounds = cfg_.method == Method::ApfHocbf
                         ? holonomic_accel_set(specs_[i], op_state(states_[i], specs_[i]).pdot)
                         : acceleration_set(specs_[i], states_[i].nu, cfg_.dt);
        } catch (const std::exception&) {
            degraded = true;
        }
        const QpOutcome out = degraded ? QpOutcome{} : solve(u_nom[i], rows, bounds);
        if (!out.solved()) {
            applied_u_[i] = braking_input(states_[i], specs_[i], cfg_.dt);
            statuses_[i] = StepStatus::Infeasible;
            continue;
        }
        statuses_[i] = StepStatus::Solved;
        applied_u_[i] =
            cfg_.method == Method::ApfHocbf
                ? convert_hocbf_command(i, op_state(states_[i], specs_[i]).pdot, out.u)
                : out.u;
    }
}

}  // namespace cahcbf
