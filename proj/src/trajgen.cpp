#include "ntstsm/trajgen.hpp"

#include <algorithm>
#include <cmath>

namespace ntstsm {

double blend_weight(double t, double T) {
    const double u = t / T;
    return 3.0 * u * u - 2.0 * u * u * u;
}

double blend_weight_dot(double t, double T) {
    const double u = t / T;
    return 6.0 * u * (1.0 - u) / T;
}

double blend_weight_ddot(double t, double T) {
    const double u = t / T;
    return 6.0 * (1.0 - 2.0 * u) / (T * T);
}

void interp_translation(const SegmentSpec& seg, double t, Vec3& p_d, Vec3& v_d, Vec3& a_d) {
    const Vec3 delta = seg.x_dg.p - seg.x_d0.p;
    p_d = seg.x_d0.p + blend_weight(t, seg.T) * delta;
    v_d = blend_weight_dot(t, seg.T) * delta;
    a_d = blend_weight_ddot(t, seg.T) * delta;
}

UnitQuaternion interp_quaternion(const SegmentSpec& seg, double t) {
    const UnitQuaternion rel = quat_mul(seg.x_dg.xi, seg.x_d0.xi.conjugate());
    const Vec3 theta = quat_to_axis(rel);
    return quat_mul(axis_to_quat(blend_weight(t, seg.T) * theta), seg.x_d0.xi);
}

Vec3 desired_angular_velocity(const UnitQuaternion& xi_now, const UnitQuaternion& xi_prev,
                              double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("desired_angular_velocity: dt must be > 0");
    }
    const UnitQuaternion diff = quat_mul(xi_now, xi_prev.conjugate()).canonicalized();
    return (2.0 / dt) * diff.eps();
}

Vec3 desired_angular_acceleration(const Vec3& w_now, const Vec3& w_prev, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("desired_angular_acceleration: dt must be > 0");
    }
    return (w_now - w_prev) / dt;
}

Trajectory::Trajectory(Pose start, std::vector<Waypoint> waypoints) {
    if (waypoints.empty()) {
        throw ConfigError("Trajectory: needs at least one waypoint");
    }
    knots_.push_back(0.0);
    points_.push_back(start.p);
    UnitQuaternion xi_prev = start.xi;
    for (const Waypoint& wp : waypoints) {
        if (!(wp.duration > 0.0)) {
            throw ConfigError("Trajectory: waypoint duration must be > 0");
        }
        knots_.push_back(knots_.back() + wp.duration);
        points_.push_back(wp.pose.p);

        QuatSegment seg;
        seg.xi0 = xi_prev;
        const UnitQuaternion rel = quat_mul(wp.pose.xi, xi_prev.conjugate());
        seg.theta = quat_to_axis(rel);
        if (seg.theta.norm() >= M_PI - 1e-6) {
            throw ConfigError("Trajectory: relative rotation of a segment reaches pi");
        }
        quat_segments_.push_back(seg);
        xi_prev = wp.pose.xi;
    }

    // Clamped cubic spline second derivatives (zero end velocities), solved
    // with the Thomas algorithm per axis.
    const int m = static_cast<int>(knots_.size()) - 1;
    spline_m_.assign(m + 1, Vec3::Zero());
    if (m >= 1) {
        std::vector<double> h(m);
        for (int i = 0; i < m; ++i) h[i] = knots_[i + 1] - knots_[i];
        for (int axis = 0; axis < 3; ++axis) {
            std::vector<double> a(m + 1), b(m + 1), c(m + 1), d(m + 1);
            auto y = [&](int i) { return points_[i][axis]; };
            b[0] = h[0] / 3.0;
            c[0] = h[0] / 6.0;
            d[0] = (y(1) - y(0)) / h[0];
            for (int i = 1; i < m; ++i) {
                a[i] = h[i - 1] / 6.0;
                b[i] = (h[i - 1] + h[i]) / 3.0;
                c[i] = h[i] / 6.0;
                d[i] = (y(i + 1) - y(i)) / h[i] - (y(i) - y(i - 1)) / h[i - 1];
            }
            a[m] = h[m - 1] / 6.0;
            b[m] = h[m - 1] / 3.0;
            d[m] = -(y(m) - y(m - 1)) / h[m - 1];

            for (int i = 1; i <= m; ++i) {
                const double w = a[i] / b[i - 1];
                b[i] -= w * c[i - 1];
                d[i] -= w * d[i - 1];
            }
            std::vector<double> sol(m + 1);
            sol[m] = d[m] / b[m];
            for (int i = m - 1; i >= 0; --i) {
                sol[i] = (d[i] - c[i] * sol[i + 1]) / b[i];
            }
            for (int i = 0; i <= m; ++i) spline_m_[i][axis] = sol[i];
        }
    }
}

Vec3 Trajectory::translation_at(double t, Vec3* v, Vec3* a) const {
    const int m = static_cast<int>(knots_.size()) - 1;
    if (t <= 0.0) {
        if (v) v->setZero();
        if (a) a->setZero();
        return points_.front();
    }
    if (t >= knots_.back()) {
        if (v) v->setZero();
        if (a) a->setZero();
        return points_.back();
    }
    int i = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) -
                             knots_.begin()) - 1;
    i = std::clamp(i, 0, m - 1);
    const double h = knots_[i + 1] - knots_[i];
    const double ta = knots_[i + 1] - t;
    const double tb = t - knots_[i];
    const Vec3& Ma = spline_m_[i];
    const Vec3& Mb = spline_m_[i + 1];
    const Vec3& ya = points_[i];
    const Vec3& yb = points_[i + 1];
    const Vec3 p = Ma * (ta * ta * ta) / (6.0 * h) + Mb * (tb * tb * tb) / (6.0 * h) +
                   (ya / h - Ma * h / 6.0) * ta + (yb / h - Mb * h / 6.0) * tb;
    if (v) {
        *v = -Ma * (ta * ta) / (2.0 * h) + Mb * (tb * tb) / (2.0 * h) + (yb - ya) / h -
             (Mb - Ma) * h / 6.0;
    }
    if (a) {
        *a = Ma * ta / h + Mb * tb / h;
    }
    return p;
}

Pose Trajectory::pose_at(double t) const {
    Pose pose;
    pose.p = translation_at(t, nullptr, nullptr);
    const int m = static_cast<int>(knots_.size()) - 1;
    if (t <= 0.0) {
        pose.xi = quat_segments_.front().xi0;
        return pose;
    }
    if (t >= knots_.back()) {
        const QuatSegment& seg = quat_segments_.back();
        pose.xi = quat_mul(axis_to_quat(seg.theta), seg.xi0);
        return pose;
    }
    int i = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) -
                             knots_.begin()) - 1;
    i = std::clamp(i, 0, m - 1);
    const double W = blend_weight(t - knots_[i], knots_[i + 1] - knots_[i]);
    const QuatSegment& seg = quat_segments_[i];
    pose.xi = quat_mul(axis_to_quat(W * seg.theta), seg.xi0);
    return pose;
}

TrajectorySample Trajectory::sample(double t, double dt) const {
    TrajectorySample s;
    s.t = t;
    s.p_d = translation_at(t, &s.v_d, &s.a_d);
    s.xi_d = pose_at(t).xi;
    if (t >= dt) {
        s.w_d = desired_angular_velocity(s.xi_d, pose_at(t - dt).xi, dt);
        if (t >= 2.0 * dt) {
            const Vec3 w_prev =
                desired_angular_velocity(pose_at(t - dt).xi, pose_at(t - 2.0 * dt).xi, dt);
            s.dw_d = desired_angular_acceleration(s.w_d, w_prev, dt);
        }
    }
    return s;
}

}  // namespace ntstsm
