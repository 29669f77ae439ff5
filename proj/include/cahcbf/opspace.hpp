#pragma once

#include "cahcbf/kinematics.hpp"
#include "cahcbf/vec2.hpp"

namespace cahcbf {

// Full robot state: configuration (phi, x, y) plus control-plane velocity.
struct AgentState {
    double phi = 0.0;  // heading, wrapped to (-pi, pi]
    Vec2 pos;          // body position [m]
    VelocityState nu;
};

// Snapshot of one agent in the shared operational space:
// pdot = G nu holds by construction, and pddot = eta + G u.
struct OpState {
    Vec2 p;
    Vec2 pdot;
    Vec2 eta;
    Mat2 G;
};

double wrap_angle(double phi);

// Look-ahead point x_r ahead of the body along the heading (body position
// itself for DI).
Vec2 reference_point(const AgentState& s, const KinematicSpec& spec);

// Velocity map J with det(J) = x_r; identity for DI.
Mat2 jacobian(const AgentState& s, const KinematicSpec& spec);

// Centripetal acceleration of the reference point induced by heading
// rotation; zero for DI and whenever omega = 0.
Vec2 drift(const AgentState& s, const KinematicSpec& spec);

// Operational-space acceleration eta + G u for body input u.
Vec2 op_accel(const AgentState& s, const KinematicSpec& spec, const Vec2& u);

// J^{-1} pdot_des, unclamped. DI passes pdot_des through.
VelocityState inverse_velocity_map(const AgentState& s, const KinematicSpec& spec,
                                   const Vec2& pdot_des);

OpState op_state(const AgentState& s, const KinematicSpec& spec);

}  // namespace cahcbf
