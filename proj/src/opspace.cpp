#include "cahcbf/opspace.hpp"

#include <cmath>

namespace cahcbf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_angle(double phi) {
    double a = std::remainder(phi, 2.0 * kPi);
    if (a <= -kPi) {
        a += 2.0 * kPi;
    }
    return a;
}

Vec2 reference_point(const AgentState& s, const KinematicSpec& spec) {
    if (spec.cls == KinematicClass::DI) {
        return s.pos;
    }
    return {s.pos.x + spec.x_r * std::cos(s.phi), s.pos.y + spec.x_r * std::sin(s.phi)};
}

Mat2 jacobian(const AgentState& s, const KinematicSpec& spec) {
    if (spec.cls == KinematicClass::DI) {
        return Mat2::identity();
    }
    const double c = std::cos(s.phi);
    const double sn = std::sin(s.phi);
    return {c, -spec.x_r * sn, sn, spec.x_r * c};
}

Vec2 drift(const AgentState& s, const KinematicSpec& spec) {
    if (spec.cls == KinematicClass::DI) {
        return {0.0, 0.0};
    }
    const double c = std::cos(s.phi);
    const double sn = std::sin(s.phi);
    const double w = s.nu.omega;
    // eta = Jdot nu with Jdot = omega d/dphi J
    const Mat2 jdot{-w * sn, -w * spec.x_r * c, w * c, -w * spec.x_r * sn};
    return jdot * Vec2{s.nu.v, s.nu.omega};
}

Vec2 op_accel(const AgentState& s, const KinematicSpec& spec, const Vec2& u) {
    return drift(s, spec) + jacobian(s, spec) * u;
}

VelocityState inverse_velocity_map(const AgentState& s, const KinematicSpec& spec,
                                   const Vec2& pdot_des) {
    if (spec.cls == KinematicClass::DI) {
        return {pdot_des.x, pdot_des.y};
    }
    const Vec2 nu = jacobian(s, spec).inverse() * pdot_des;
    return {nu.x, nu.y};
}

OpState op_state(const AgentState& s, const KinematicSpec& spec) {
    OpState o;
    o.G = jacobian(s, spec);
    o.p = reference_point(s, spec);
    o.pdot = o.G * Vec2{s.nu.v, s.nu.omega};
    o.eta = drift(s, spec);
    return o;
}

}  // namespace cahcbf
