/**
 * @file rotation.hpp
 * @brief Unit-quaternion algebra, quaternion tracking errors, and the task-error
 *        map H used by the task-space controllers.
 */

#pragma once

#include <Eigen/Dense>

#include "ntstsm/errors.hpp"

namespace ntstsm {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Skew-symmetric matrix [v] such that [v]w = v x w.
Mat3 skew(const Vec3& v);

/**
 * @brief Unit quaternion (eta, eps) with eta the real part.
 *
 * Construction normalizes but preserves the sign; call canonicalized() to
 * flip onto the eta >= 0 half of the double cover.
 */
class UnitQuaternion {
public:
    UnitQuaternion() : eta_(1.0), eps_(Vec3::Zero()) {}
    UnitQuaternion(double eta, const Vec3& eps);

    static UnitQuaternion identity() { return UnitQuaternion(); }
    /// From a rotation matrix (canonical sign, eta >= 0).
    static UnitQuaternion from_matrix(const Mat3& R);
    /// Rotation of `angle` radians about `axis` (need not be unit length).
    static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);

    double eta() const { return eta_; }
    const Vec3& eps() const { return eps_; }

    Mat3 to_matrix() const;
    Vec3 rotate(const Vec3& v) const;

    UnitQuaternion conjugate() const { return UnitQuaternion(eta_, -eps_); }
    /// Sign-flipped onto eta >= 0 (ties keep the stored sign).
    UnitQuaternion canonicalized() const;

    double dot(const UnitQuaternion& other) const;
    bool is_finite() const;

private:
    double eta_;
    Vec3 eps_;
};

/// Hamilton product a (x) b.
UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b);
UnitQuaternion quat_conj(const UnitQuaternion& a);

/// Quaternion -> scaled angle-axis Theta with |Theta| <= pi.
Vec3 quat_to_axis(const UnitQuaternion& xi);
/// Scaled angle-axis -> quaternion (Taylor branch below 1e-8 rad).
UnitQuaternion axis_to_quat(const Vec3& theta);

/**
 * @brief Quaternion tracking error (eta_t, eps_t) between a measured and a
 *        desired orientation, canonicalized to the shortest rotation
 *        (eta_t >= 0).
 */
struct QuatError {
    double eta_t = 1.0;
    Vec3 eps_t = Vec3::Zero();
};

QuatError quat_error(const UnitQuaternion& measured, const UnitQuaternion& desired);
/// Same formula without the shortest-rotation sign canonicalization.
QuatError quat_error_raw(const UnitQuaternion& measured, const UnitQuaternion& desired);

/**
 * @brief Block map from (p_tilde_dot, omega_tilde) to task-error rates:
 *        identity on translation, (1/2)(eta_t I + [eps_t]) on rotation.
 *
 * Invertible while |eta_t| stays above the floor; both H and H^-1 are cached.
 */
class HMatrix {
public:
    static constexpr double kEtaFloor = 0.1;

    /// Throws OrientationErrorTooLarge when |eta_t| < kEtaFloor.
    explicit HMatrix(const QuatError& err);

    const Mat6& matrix() const { return h_; }
    const Mat6& inverse() const { return h_inv_; }

    Vec6 apply(const Vec6& v) const { return h_ * v; }
    Vec6 apply_inverse(const Vec6& v) const { return h_inv_ * v; }

    const Mat3& rotational_block() const { return rot_; }

private:
    Mat3 rot_;
    Mat6 h_;
    Mat6 h_inv_;
};

}  // namespace ntstsm
