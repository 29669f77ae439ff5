#include "cahcbf/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace cahcbf {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kVelocitySlack = 1e-6;
}  // namespace

const char* class_name(KinematicClass c) {
    switch (c) {
        case KinematicClass::DI: return "DI";
        case KinematicClass::UNI: return "UNI";
        case KinematicClass::DD: return "DD";
        case KinematicClass::CL: return "CL";
        case KinematicClass::FO: return "FO";
    }
    return "?";
}

KinematicClass class_from_name(const std::string& name) {
    if (name == "DI") return KinematicClass::DI;
    if (name == "UNI") return KinematicClass::UNI;
    if (name == "DD") return KinematicClass::DD;
    if (name == "CL") return KinematicClass::CL;
    if (name == "FO") return KinematicClass::FO;
    throw std::invalid_argument("unknown kinematic class: " + name);
}

KinematicSpec KinematicSpec::defaults(KinematicClass c) {
    KinematicSpec s;
    s.cls = c;
    s.v_max = 1.0;
    s.a_max = 2.0;
    switch (c) {
        case KinematicClass::DI:
            s.r_phys = 0.3;
            break;
        case KinematicClass::UNI:
            s.x_r = 0.1;
            s.omega_max = kPi;
            s.omega_dot_max = 8.0;
            s.r_phys = 0.3;
            break;
        case KinematicClass::DD:
            s.x_r = 0.1;
            s.wheelbase = 0.5;
            s.a_max = 2.0;  // wheel-acceleration bound a_w
            s.r_phys = 0.3;
            break;
        case KinematicClass::CL:
        case KinematicClass::FO:
            s.x_r = 0.2;
            s.omega_dot_max = 10.0;
            s.wheelbase = 0.5;
            s.psi_max = kPi / 4.0;
            // 0.3 x 0.6 body rectangle circumscribed by its half-diagonal
            s.r_phys = std::hypot(0.15, 0.30);
            s.steer_floor = 0.1;
            break;
    }
    return s;
}

void KinematicSpec::validate() const {
    const bool nonholonomic = cls != KinematicClass::DI;
    if (v_max <= 0.0) throw std::invalid_argument("spec: v_max must be positive");
    if (a_max <= 0.0) throw std::invalid_argument("spec: a_max must be positive");
    if (r_phys < 0.0) throw std::invalid_argument("spec: r_phys must be nonnegative");
    if (steer_floor < 0.0) throw std::invalid_argument("spec: steer_floor must be nonnegative");
    if (nonholonomic && x_r <= 0.0) {
        throw std::invalid_argument("spec: x_r must be positive for nonholonomic classes");
    }
    if (cls == KinematicClass::UNI) {
        if (omega_max <= 0.0) throw std::invalid_argument("spec: omega_max must be positive");
        if (omega_dot_max <= 0.0) throw std::invalid_argument("spec: omega_dot_max must be positive");
    }
    if (cls == KinematicClass::DD || cls == KinematicClass::CL || cls == KinematicClass::FO) {
        if (wheelbase <= 0.0) throw std::invalid_argument("spec: wheelbase must be positive");
    }
    if (cls == KinematicClass::CL || cls == KinematicClass::FO) {
        if (psi_max <= 0.0 || psi_max >= kPi / 2.0) {
            throw std::invalid_argument("spec: psi_max must lie in (0, pi/2)");
        }
        if (omega_dot_max <= 0.0) throw std::invalid_argument("spec: omega_dot_max must be positive");
    }
}

namespace {

std::vector<HalfSpace> velocity_rows(const KinematicSpec& s) {
    switch (s.cls) {
        case KinematicClass::DI:
        case KinematicClass::UNI: {
            const double w = s.cls == KinematicClass::DI ? s.v_max : s.omega_max;
            return {{{1.0, 0.0}, s.v_max},
                    {{-1.0, 0.0}, s.v_max},
                    {{0.0, 1.0}, w},
                    {{0.0, -1.0}, w}};
        }
        case KinematicClass::DD: {
            // wheel speeds: |v +- (l/2) omega| <= v_max
            const double hl = 0.5 * s.wheelbase;
            return {{{1.0, hl}, s.v_max},
                    {{-1.0, -hl}, s.v_max},
                    {{1.0, -hl}, s.v_max},
                    {{-1.0, hl}, s.v_max}};
        }
        case KinematicClass::CL:
        case KinematicClass::FO: {
            // Curvature cone |omega| <= (v / l) tan(psi_max), apex at the
            // origin, so steering authority scales with forward speed. The
            // cone itself already forces v >= 0; the explicit row keeps the
            // forward-only contract visible.
            const double slope = std::tan(s.psi_max) / s.wheelbase;
            return {{{-slope, 1.0}, 0.0},
                    {{-slope, -1.0}, 0.0},
                    {{1.0, 0.0}, s.v_max},
                    {{-1.0, 0.0}, 0.0}};
        }
    }
    return {};
}

}  // namespace

Polytope2 velocity_set(const KinematicSpec& spec) {
    spec.validate();
    return Polytope2::from_halfspaces(velocity_rows(spec));
}

Polytope2 acceleration_bounds(const KinematicSpec& spec) {
    spec.validate();
    switch (spec.cls) {
        case KinematicClass::DI:
            return Polytope2::box(spec.a_max, spec.a_max);
        case KinematicClass::UNI:
        case KinematicClass::CL:
        case KinematicClass::FO:
            return Polytope2::box(spec.a_max, spec.omega_dot_max);
        case KinematicClass::DD: {
            const double hl = 0.5 * spec.wheelbase;
            return Polytope2::from_halfspaces({{{1.0, hl}, spec.a_max},
                                               {{-1.0, -hl}, spec.a_max},
                                               {{1.0, -hl}, spec.a_max},
                                               {{-1.0, hl}, spec.a_max}});
        }
    }
    throw std::invalid_argument("spec: bad class");
}

Polytope2 acceleration_set(const KinematicSpec& spec, const VelocityState& nu, double dt) {
    spec.validate();
    const Vec2 v{nu.v, nu.omega};

    const Polytope2 bounds = acceleration_bounds(spec);
    std::vector<HalfSpace> rows = bounds.halfspaces();
    double worst = 0.0;
    for (const HalfSpace& hs : velocity_rows(spec)) {
        const double len = norm(hs.n);
        const double margin = (hs.c - dot(hs.n, v)) / len;
        worst = std::min(worst, margin);
        // One-step membership: n·(nu + u dt) <= c. The right side is kept
        // nonnegative so u = 0 stays feasible when nu sits within slack of
        // the boundary.
        rows.push_back({hs.n * (1.0 / len), std::max(margin, 0.0) / dt});
    }
    if (worst < -kVelocitySlack) {
        throw std::domain_error("acceleration_set: velocity outside admissible set");
    }
    const bool steer_cone = spec.cls == KinematicClass::CL || spec.cls == KinematicClass::FO;
    if (steer_cone && spec.steer_floor > 0.0) {
        for (HalfSpace& hs : rows) {
            hs.c = std::max(hs.c, std::abs(hs.n.y) * spec.steer_floor);
        }
    }
    return Polytope2::from_halfspaces(rows);
}

VelocityState clamp_velocity(const KinematicSpec& spec, const VelocityState& nu) {
    const Vec2 p = velocity_set(spec).project({nu.v, nu.omega});
    return {p.x, p.y};
}

}  // namespace cahcbf
