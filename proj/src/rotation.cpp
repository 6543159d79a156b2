#include "ntstsm/rotation.hpp"

#include <cmath>

namespace ntstsm {

Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

UnitQuaternion::UnitQuaternion(double eta, const Vec3& eps) : eta_(eta), eps_(eps) {
    const double n = std::sqrt(eta_ * eta_ + eps_.squaredNorm());
    if (n <= 0.0 || !std::isfinite(n)) {
        throw std::invalid_argument("UnitQuaternion: non-normalizable input");
    }
    eta_ /= n;
    eps_ /= n;
}

UnitQuaternion UnitQuaternion::from_matrix(const Mat3& R) {
    const Eigen::Quaterniond q(R);
    UnitQuaternion out(q.w(), Vec3(q.x(), q.y(), q.z()));
    return out.canonicalized();
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (n < 1e-15) {
        return identity();
    }
    return UnitQuaternion(std::cos(0.5 * angle), std::sin(0.5 * angle) * (axis / n));
}

Mat3 UnitQuaternion::to_matrix() const {
    return Eigen::Quaterniond(eta_, eps_.x(), eps_.y(), eps_.z()).toRotationMatrix();
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const {
    // v' = v + 2 eps x (eps x v + eta v)
    const Vec3 t = eps_.cross(v) + eta_ * v;
    return v + 2.0 * eps_.cross(t);
}

UnitQuaternion UnitQuaternion::canonicalized() const {
    if (eta_ < 0.0) {
        return UnitQuaternion(-eta_, -eps_);
    }
    return *this;
}

double UnitQuaternion::dot(const UnitQuaternion& other) const {
    return eta_ * other.eta_ + eps_.dot(other.eps_);
}

bool UnitQuaternion::is_finite() const {
    return std::isfinite(eta_) && eps_.allFinite();
}

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b) {
    const double eta = a.eta() * b.eta() - a.eps().dot(b.eps());
    const Vec3 eps = a.eta() * b.eps() + b.eta() * a.eps() + a.eps().cross(b.eps());
    return UnitQuaternion(eta, eps);
}

UnitQuaternion quat_conj(const UnitQuaternion& a) {
    return a.conjugate();
}

Vec3 quat_to_axis(const UnitQuaternion& xi) {
    const UnitQuaternion q = xi.canonicalized();
    const double s = q.eps().norm();
    if (s < 1e-8) {
        // sin(angle/2) ~ angle/2: Theta ~ 2 eps to first order
        return 2.0 * q.eps();
    }
    const double angle = 2.0 * std::atan2(s, q.eta());
    return (angle / s) * q.eps();
}

UnitQuaternion axis_to_quat(const Vec3& theta) {
    const double angle = theta.norm();
    if (angle < 1e-8) {
        // cos(a/2) ~ 1, sin(a/2)/a ~ 1/2
        return UnitQuaternion(1.0, 0.5 * theta);
    }
    return UnitQuaternion(std::cos(0.5 * angle), std::sin(0.5 * angle) / angle * theta);
}

QuatError quat_error_raw(const UnitQuaternion& measured, const UnitQuaternion& desired) {
    QuatError e;
    e.eta_t = measured.eta() * desired.eta() + measured.eps().dot(desired.eps());
    e.eps_t = -measured.eta() * desired.eps() + desired.eta() * measured.eps()
              - measured.eps().cross(desired.eps());
    return e;
}

QuatError quat_error(const UnitQuaternion& measured, const UnitQuaternion& desired) {
    QuatError e = quat_error_raw(measured, desired);
    if (e.eta_t < 0.0) {
        e.eta_t = -e.eta_t;
        e.eps_t = -e.eps_t;
    }
    return e;
}

HMatrix::HMatrix(const QuatError& err) {
    if (!(std::abs(err.eta_t) >= kEtaFloor)) {
        throw OrientationErrorTooLarge("HMatrix: |eta_t| = " + std::to_string(err.eta_t) +
                                       " below floor " + std::to_string(kEtaFloor));
    }
    rot_ = 0.5 * (err.eta_t * Mat3::Identity() + skew(err.eps_t));
    h_.setZero();
    h_.topLeftCorner<3, 3>() = Mat3::Identity();
    h_.bottomRightCorner<3, 3>() = rot_;
    h_inv_.setZero();
    h_inv_.topLeftCorner<3, 3>() = Mat3::Identity();
    h_inv_.bottomRightCorner<3, 3>() = rot_.inverse();
}

}  // namespace ntstsm
