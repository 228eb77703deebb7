#pragma once

#include "arctrack/errors.hpp"
#include "arctrack/geometry.hpp"

namespace arctrack {

/// Minimum distance [m] between the state and the curvature center; the
/// turn-rate dynamics and their Jacobian divide by this distance (and its
/// cube), so anything closer is rejected as degenerate.
inline constexpr double kEpsRadius = 1e-6;

/// Planar position estimate in the inertial east-north plane.
struct TargetState {
    Vec2 pos;
};

/// Control-style input of the turn model: target speed and the
/// instantaneous curvature center.
struct InputVector {
    double speed = 0.0;  ///< V_a >= 0 [m/s]
    Vec2 center;         ///< curvature center [m]
};

/// Timestamped position measurement, already mapped to the inertial plane.
struct Measurement {
    double t = 0.0;
    Vec2 pos;
};

/// Continuous-time turn dynamics: the velocity is tangent to the circle
/// about u.center, with magnitude u.speed. Counterclockwise for a target
/// east of its center moving north.
inline Vec2 f_dynamics(const TargetState& x, const InputVector& u) {
    const Vec2 d = x.pos - u.center;
    const double rho = d.norm();
    if (!(rho > kEpsRadius)) {
        throw DegenerateRadius("f_dynamics: state within " +
                               std::to_string(kEpsRadius) +
                               " m of the curvature center");
    }
    return {-u.speed * d.n / rho, u.speed * d.e / rho};
}

/// d f_dynamics / d pos, closed form.
inline Mat2 jacobian_a(const TargetState& x, const InputVector& u) {
    const Vec2 d = x.pos - u.center;
    const double rho = d.norm();
    if (!(rho > kEpsRadius)) {
        throw DegenerateRadius("jacobian_a: state within " +
                               std::to_string(kEpsRadius) +
                               " m of the curvature center");
    }
    const double k = u.speed / (rho * rho * rho);
    return {k * d.n * d.e, -k * d.e * d.e,
            k * d.n * d.n, -k * d.e * d.n};
}

/// Measurement model: position is observed directly.
inline Vec2 h_measure(const TargetState& x) { return x.pos; }

/// d h_measure / d pos.
inline constexpr Mat2 jacobian_c() { return Mat2::identity(); }

}  // namespace arctrack
