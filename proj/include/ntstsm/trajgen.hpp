/**
 * @file trajgen.hpp
 * @brief Desired-trajectory synthesis: clamped cubic splines for translation,
 *        cubic-Hermite quaternion interpolation, and finite-difference desired
 *        angular velocity / acceleration.
 */

#pragma once

#include <vector>

#include "ntstsm/rigidbody.hpp"
#include "ntstsm/rotation.hpp"

namespace ntstsm {

struct TrajectorySample {
    double t = 0.0;
    Vec3 p_d = Vec3::Zero();
    UnitQuaternion xi_d;
    Vec3 v_d = Vec3::Zero();    // m/s
    Vec3 w_d = Vec3::Zero();    // rad/s, world frame
    Vec3 a_d = Vec3::Zero();    // m/s^2
    Vec3 dw_d = Vec3::Zero();   // rad/s^2

    Vec6 twist() const {
        Vec6 v;
        v << v_d, w_d;
        return v;
    }
    Vec6 accel() const {
        Vec6 a;
        a << a_d, dw_d;
        return a;
    }
};

/// One interpolation segment between two poses over duration T.
struct SegmentSpec {
    Pose x_d0;
    Pose x_dg;
    double T = 1.0;
};

/// Cubic Hermite blend W(t) = 3 (t/T)^2 - 2 (t/T)^3 and its time derivatives.
double blend_weight(double t, double T);
double blend_weight_dot(double t, double T);
double blend_weight_ddot(double t, double T);

/// Single-segment clamped cubic translation: endpoint positions exact,
/// endpoint velocities zero, exact derivatives.
void interp_translation(const SegmentSpec& seg, double t, Vec3& p_d, Vec3& v_d, Vec3& a_d);

/// Blend of the relative rotation's scaled angle-axis, renormalized.
UnitQuaternion interp_quaternion(const SegmentSpec& seg, double t);

/// One-step backward quaternion-difference angular velocity (world frame):
/// w = (2/dt) vec(xi_now (x) xi_prev^*).
Vec3 desired_angular_velocity(const UnitQuaternion& xi_now, const UnitQuaternion& xi_prev,
                              double dt);

/// Backward finite difference of the desired angular velocity.
Vec3 desired_angular_acceleration(const Vec3& w_now, const Vec3& w_prev, double dt);

struct Waypoint {
    Pose pose;
    double duration = 1.0;  // time from the previous waypoint, s
};

/**
 * @brief Multi-waypoint trajectory: clamped cubic spline through the
 *        translation waypoints (zero start/end velocity, C2 at interior
 *        knots) and per-segment Hermite-blended quaternion interpolation.
 *
 * Angular velocity and acceleration are produced by the one-step backward
 * differences above, evaluated at the sampling period given to sample().
 * Rejects segments whose relative rotation reaches pi.
 */
class Trajectory {
public:
    Trajectory(Pose start, std::vector<Waypoint> waypoints);

    TrajectorySample sample(double t, double dt) const;

    /// Pose-only evaluation (holds the first/last waypoint outside [0, T]).
    Pose pose_at(double t) const;

    double total_duration() const { return knots_.back(); }

private:
    struct QuatSegment {
        UnitQuaternion xi0;
        Vec3 theta;  // scaled angle-axis of the relative rotation
    };

    Vec3 translation_at(double t, Vec3* v, Vec3* a) const;

    std::vector<double> knots_;             // cumulative times, knots_[0] = 0
    std::vector<Vec3> points_;              // translation waypoints
    std::vector<Vec3> spline_m_;            // spline second derivatives per knot
    std::vector<QuatSegment> quat_segments_;
};

}  // namespace ntstsm
