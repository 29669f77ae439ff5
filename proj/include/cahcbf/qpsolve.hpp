#pragma once

#include <span>
#include <vector>

#include "cahcbf/opspace.hpp"
#include "cahcbf/polytope.hpp"

namespace cahcbf {

// One linear constraint a·u >= b.
struct QpRow {
    Vec2 a;
    double b = 0.0;
};

enum class QpStatus { Solved, Infeasible };

struct QpOutcome {
    QpStatus status = QpStatus::Infeasible;
    Vec2 u;
    // Indices of the constraints active at the optimum (rows first, then
    // bound half-spaces), in candidate-enumeration order.
    int active[2] = {-1, -1};
    int n_active = 0;

    bool solved() const { return status == QpStatus::Solved; }
};

struct QpProblem {
    Vec2 u_nom;
    std::vector<QpRow> rows;
    Polytope2 bounds;
};

// Exact minimizer of |u - u_nom|^2 over the intersection of all rows and the
// bounds polytope, found by enumerating the unconstrained point, every
// single-constraint projection, and every constraint-pair vertex. With two
// variables this candidate family contains the optimum whenever the
// intersection is nonempty, so an exhaustive scan is both exact and
// deterministic.
QpOutcome solve(const Vec2& u_nom, std::span<const QpRow> rows, const Polytope2& bounds);
QpOutcome solve(const QpProblem& problem);

// Last-resort fallback: the admissible acceleration that contracts nu toward
// zero as fast as the input bounds allow, by scaling -nu/dt into the
// acceleration bounds along its own direction. Always lies inside
// acceleration_set(spec, nu, dt).
Vec2 braking_input(const AgentState& s, const KinematicSpec& spec, double dt);

}  // namespace cahcbf
