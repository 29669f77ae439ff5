#pragma once

#include <string>

#include "cahcbf/polytope.hpp"
#include "cahcbf/vec2.hpp"

namespace cahcbf {

// The five supported kinematic classes. DI is the only holonomic one.
enum class KinematicClass { DI, UNI, DD, CL, FO };

const char* class_name(KinematicClass c);
KinematicClass class_from_name(const std::string& name);

// Velocity state in the 2-D control plane: (v, omega) for the wheeled
// classes, Cartesian (vx, vy) for DI.
struct VelocityState {
    double v = 0.0;
    double omega = 0.0;
};

struct KinematicSpec {
    KinematicClass cls = KinematicClass::DI;
    double x_r = 0.0;            // look-ahead distance [m], 0 for DI
    double v_max = 1.0;          // max forward speed [m/s]
    double omega_max = 0.0;      // max angular rate [rad/s], UNI only
    double a_max = 2.0;          // max linear (DD: wheel) acceleration [m/s^2]
    double omega_dot_max = 0.0;  // max angular acceleration [rad/s^2]
    double wheelbase = 0.0;      // [m], DD/CL/FO
    double psi_max = 0.0;        // max steering angle [rad], CL/FO
    double r_phys = 0.3;         // physical bounding radius [m]
    double steer_floor = 0.0;    // min angular-acceleration half-width, CL/FO

    static KinematicSpec defaults(KinematicClass c);

    // Throws std::invalid_argument when a required parameter is nonpositive.
    void validate() const;
};

// Velocity-level admissible set in the (v, omega) plane (DI: (vx, vy)).
Polytope2 velocity_set(const KinematicSpec& spec);

// Raw input-acceleration bounds, independent of the current velocity
// (box for DI/UNI/CL/FO, wheel-acceleration diamond for DD).
Polytope2 acceleration_bounds(const KinematicSpec& spec);

// Acceleration-level admissible set: inputs inside the acceleration bounds
// whose one-step velocity update stays inside velocity_set. For CL/FO every
// row is relaxed just enough to admit (0, +-steer_floor), so the steering
// authority never collapses entirely at zero forward speed.
// Throws std::domain_error when nu violates velocity_set by more than 1e-6.
Polytope2 acceleration_set(const KinematicSpec& spec, const VelocityState& nu, double dt);

// Nearest admissible velocity in the Euclidean norm; identity when inside.
VelocityState clamp_velocity(const KinematicSpec& spec, const VelocityState& nu);

}  // namespace cahcbf
