#include "doctest.h"

#include "cahcbf/qpsolve.hpp"
#include "cahcbf/rng.hpp"
#include "oracles.hpp"

using namespace cahcbf;

namespace {

// normalized <= form of rows plus bounds, for the oracles
std::vector<HalfSpace> as_halfspaces(const std::vector<QpRow>& rows, const Polytope2& bounds) {
    std::vector<HalfSpace> out;
    for (const QpRow& r : rows) {
        const double len = norm(r.a);
        out.push_back({-r.a * (1.0 / len), -r.b / len});
    }
    for (const HalfSpace& hs : bounds.halfspaces()) {
        out.push_back(hs);
    }
    return out;
}

// multipliers of u* - u_nom on the active inward normals must be nonnegative
double kkt_residual(const Vec2& u_nom, const std::vector<QpRow>& rows, const Polytope2& bounds,
                    const QpOutcome& out) {
    const std::vector<HalfSpace> cons = as_halfspaces(rows, bounds);
    const Vec2 r = out.u - u_nom;
    if (out.n_active == 0) {
        return norm(r);
    }
    if (out.n_active == 1) {
        const Vec2 n = cons[out.active[0]].n;
        const double mu = -dot(r, n);
        if (mu < -1e-9) {
            return 1e9;
        }
        return norm(r + mu * n);
    }
    const Vec2 n0 = cons[out.active[0]].n;
    const Vec2 n1 = cons[out.active[1]].n;
    const double det = cross(n0, n1);
    if (std::abs(det) < 1e-12) {
        return 1e9;
    }
    // solve r = -mu0 n0 - mu1 n1
    const double mu0 = -cross(r, n1) / det;
    const double mu1 = cross(r, n0) / det;
    if (mu0 < -1e-9 || mu1 < -1e-9) {
        return 1e9;
    }
    return norm(r + mu0 * n0 + mu1 * n1);
}

}  // namespace

TEST_CASE("textbook instances") {
    const Polytope2 box = Polytope2::box(2.0, 2.0);
    SUBCASE("interior optimum") {
        const QpOutcome out = solve({0.0, 0.0}, {}, box);
        REQUIRE(out.solved());
        CHECK(out.u.x == 0.0);
        CHECK(out.u.y == 0.0);
        CHECK(out.n_active == 0);
    }
    SUBCASE("single-face projection") {
        const QpOutcome out = solve({3.0, 0.0}, {}, box);
        REQUIRE(out.solved());
        CHECK(out.u.x == doctest::Approx(2.0));
        CHECK(out.u.y == doctest::Approx(0.0));
    }
    SUBCASE("closest point on an active row") {
        const std::vector<QpRow> rows = {{{1.0, 1.0}, 2.0}};  // u1 + u2 >= 2
        const QpOutcome out = solve({0.0, 0.0}, rows, box);
        REQUIRE(out.solved());
        CHECK(out.u.x == doctest::Approx(1.0));
        CHECK(out.u.y == doctest::Approx(1.0));
    }
    SUBCASE("contradictory half-spaces are infeasible") {
        const std::vector<QpRow> rows = {{{1.0, 0.0}, 3.0}};  // u1 >= 3 vs |u1| <= 2
        const QpOutcome out = solve({0.0, 0.0}, rows, box);
        CHECK_FALSE(out.solved());
    }
}

TEST_CASE("idempotence and determinism") {
    const Polytope2 box = Polytope2::box(2.0, 2.0);
    const std::vector<QpRow> rows = {{{1.0, 1.0}, 2.0}, {{-0.3, 1.0}, -1.0}};
    const QpOutcome a = solve({-1.0, -2.5}, rows, box);
    REQUIRE(a.solved());
    const QpOutcome b = solve(a.u, rows, box);
    REQUIRE(b.solved());
    CHECK(norm(b.u - a.u) < 1e-9);
    const QpOutcome c = solve({-1.0, -2.5}, rows, box);
    CHECK(c.u.x == a.u.x);  // bitwise
    CHECK(c.u.y == a.u.y);
}

TEST_CASE("random problems against grid and feasibility oracles") {
    SplitMix64 rng(2024);
    constexpr double kTwoPi = 6.283185307179586;
    const double res = 1e-3;
    int solved_count = 0;
    int infeasible_count = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double bx = rng.uniform(0.5, 2.5);
        const double by = rng.uniform(0.5, 2.5);
        const Polytope2 bounds = Polytope2::box(bx, by);
        std::vector<QpRow> rows;
        // keep constraint directions angularly separated so the comparison
        // against a finite lattice is well-posed (no razor-thin wedges)
        std::vector<double> thetas = {0.0, kTwoPi / 4, kTwoPi / 2, 3 * kTwoPi / 4};
        const int n_rows = static_cast<int>(rng.uniform(0.0, 9.0));
        for (int k = 0; k < n_rows; ++k) {
            double theta = 0.0;
            bool ok = false;
            while (!ok) {
                theta = rng.uniform(0.0, kTwoPi);
                ok = true;
                for (double t : thetas) {
                    double d = std::abs(theta - t);
                    d = std::min(d, kTwoPi - d);
                    if (d < 0.35) {
                        ok = false;
                        break;
                    }
                }
            }
            thetas.push_back(theta);
            rows.push_back({{std::cos(theta), std::sin(theta)}, rng.uniform(-2.0, 2.0)});
        }
        const Vec2 u_nom{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};

        const QpOutcome out = solve(u_nom, rows, bounds);
        const std::vector<HalfSpace> cons = as_halfspaces(rows, bounds);

        // feasibility verdicts must match Fourier-Motzkin exactly
        CHECK(out.solved() == oracle::fm_feasible(cons));

        if (!out.solved()) {
            ++infeasible_count;
            continue;
        }
        ++solved_count;
        CHECK(kkt_residual(u_nom, rows, bounds, out) <= 1e-6);

        const auto grid = oracle::grid_nearest(cons, u_nom, -bx, bx, res, 0.75 * res);
        if (grid.has_value()) {
            const double d_exact = norm(out.u - u_nom);
            const double d_grid = norm(*grid - u_nom);
            CHECK(std::abs(d_grid - d_exact) <= 2.0 * res * std::sqrt(2.0));
        }
    }
    // the generator must exercise both verdicts
    CHECK(solved_count > 300);
    CHECK(infeasible_count > 50);
}

TEST_CASE("braking input") {
    const double dt = 0.05;
    SUBCASE("already stopped") {
        const KinematicSpec s = KinematicSpec::defaults(KinematicClass::UNI);
        const Vec2 u = braking_input({0.0, {0, 0}, {0.0, 0.0}}, s, dt);
        CHECK(u.x == 0.0);
        CHECK(u.y == 0.0);
    }
    SUBCASE("saturates at the acceleration bound") {
        const KinematicSpec s = KinematicSpec::defaults(KinematicClass::UNI);
        const AgentState st{0.0, {0, 0}, {1.0, 0.0}};
        const Vec2 u = braking_input(st, s, dt);
        CHECK(u.x == doctest::Approx(-2.0));
        CHECK(u.y == doctest::Approx(0.0));
        CHECK(acceleration_set(s, st.nu, dt).contains(u, 1e-9));
    }
    SUBCASE("repeated braking stops within the closed-form step bound") {
        const KinematicClass classes[] = {KinematicClass::DI, KinematicClass::UNI,
                                          KinematicClass::DD, KinematicClass::CL,
                                          KinematicClass::FO};
        for (KinematicClass cls : classes) {
            const KinematicSpec s = KinematicSpec::defaults(cls);
            // worst case: full speed (with a turn where the class allows it)
            VelocityState nu{s.v_max, 0.0};
            if (cls == KinematicClass::UNI) {
                nu.omega = s.omega_max;
            } else if (cls == KinematicClass::CL || cls == KinematicClass::FO) {
                nu.omega = s.v_max * std::tan(s.psi_max) / s.wheelbase;
            }
            const int budget = static_cast<int>(std::ceil(s.v_max / (s.a_max * dt)));
            AgentState st{0.0, {0, 0}, nu};
            int steps = 0;
            while (std::hypot(st.nu.v, st.nu.omega) > 1e-12 && steps <= budget + 1) {
                const Vec2 u = braking_input(st, s, dt);
                st.nu.v += u.x * dt;
                st.nu.omega += u.y * dt;
                ++steps;
            }
            CHECK(steps <= budget);
            CHECK(std::hypot(st.nu.v, st.nu.omega) <= 1e-12);
        }
    }
}
