#include "cahcbf/qpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cahcbf {

namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kParallelTol = 1e-12;

// Internal <= form with unit normals: n·u <= c.
struct Ineq {
    Vec2 n;
    double c;
};

bool feasible(const std::vector<Ineq>& cons, const Vec2& u) {
    for (const Ineq& q : cons) {
        if (dot(q.n, u) > q.c + kFeasTol) {
            return false;
        }
    }
    return true;
}

}  // namespace

QpOutcome solve(const Vec2& u_nom, std::span<const QpRow> rows, const Polytope2& bounds) {
    std::vector<Ineq> cons;
    cons.reserve(rows.size() + bounds.halfspaces().size());
    for (const QpRow& r : rows) {
        const double len = norm(r.a);
        if (len < 1e-15) {
            if (r.b > kFeasTol) {
                return {};  // 0 >= b with b > 0: infeasible row
            }
            continue;
        }
        cons.push_back({-r.a * (1.0 / len), -r.b / len});
    }
    for (const HalfSpace& hs : bounds.halfspaces()) {
        cons.push_back({hs.n, hs.c});
    }
    // Same-direction duplicates: keep the tighter offset so near-parallel
    // pair intersections never enter the candidate set.
    for (size_t i = 0; i < cons.size(); ++i) {
        for (size_t j = i + 1; j < cons.size(); ++j) {
            if (norm(cons[i].n - cons[j].n) < kParallelTol) {
                const double c = std::min(cons[i].c, cons[j].c);
                cons[i].c = c;
                cons[j].c = c;
            }
        }
    }

    QpOutcome best;
    double best_obj = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec2& u, int i0, int i1, int count) {
        const double obj = norm_sq(u - u_nom);
        if (obj < best_obj - 1e-15 && feasible(cons, u)) {
            best_obj = obj;
            best.status = QpStatus::Solved;
            best.u = u;
            best.active[0] = i0;
            best.active[1] = i1;
            best.n_active = count;
        }
    };

    consider(u_nom, -1, -1, 0);
    if (best.solved()) {
        return best;  // interior optimum; nothing can beat objective 0
    }
    const int m = static_cast<int>(cons.size());
    for (int i = 0; i < m; ++i) {
        const Vec2 u = u_nom + (cons[i].c - dot(cons[i].n, u_nom)) * cons[i].n;
        consider(u, i, -1, 1);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double d = cross(cons[i].n, cons[j].n);
            if (std::abs(d) < kParallelTol) {
                continue;
            }
            const Vec2 u{(cons[i].c * cons[j].n.y - cons[j].c * cons[i].n.y) / d,
                         (cons[j].c * cons[i].n.x - cons[i].c * cons[j].n.x) / d};
            consider(u, i, j, 2);
        }
    }
    return best;
}

QpOutcome solve(const QpProblem& problem) {
    return solve(problem.u_nom, problem.rows, problem.bounds);
}

Vec2 braking_input(const AgentState& s, const KinematicSpec& spec, double dt) {
    const Vec2 nu{s.nu.v, s.nu.omega};
    if (norm(nu) == 0.0) {
        return {0.0, 0.0};
    }
    const Polytope2 bounds = acceleration_bounds(spec);
    double scale = 1.0 / dt;
    for (const HalfSpace& hs : bounds.halfspaces()) {
        const double along = -dot(hs.n, nu);  // n·(-s nu) = s·along
        if (along > 0.0) {
            scale = std::min(scale, hs.c / along);
        }
    }
    return -scale * nu;
}

}  // namespace cahcbf
