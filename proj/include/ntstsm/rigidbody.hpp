/**
 * @file rigidbody.hpp
 * @brief Serial-chain kinematics and dynamics: forward kinematics, geometric
 *        Jacobian and its time derivative, joint-space M / C qdot / G via
 *        CRBA and RNEA, task-space projections, friction, and forward-dynamics
 *        integration.
 */

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntstsm/errors.hpp"
#include "ntstsm/rotation.hpp"

namespace ntstsm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Mat4 = Eigen::Matrix4d;
using Iso3 = Eigen::Isometry3d;

struct Pose {
    Vec3 p = Vec3::Zero();
    UnitQuaternion xi;
};

/// Per-link description. The fixed transform maps the parent frame to the
/// joint frame; the (revolute) joint then rotates about `axis`.
struct Link {
    Iso3 transform = Iso3::Identity();
    Vec3 axis = Vec3::UnitZ();        // unit, in the joint frame
    double mass = 0.0;                // kg
    Vec3 com = Vec3::Zero();          // m, link frame
    Mat3 inertia = Mat3::Zero();      // kg m^2 about the COM, link frame
};

struct JointLimits {
    VectorXd q_min, q_max;    // rad
    VectorXd dq_max;          // rad/s
    VectorXd tau_max;         // N m
};

/**
 * @brief Immutable model of an unbranched serial chain of revolute joints.
 *
 * Invariants are checked at construction: positive masses, symmetric
 * positive-definite inertias, unit axes, n >= 6.
 */
class ChainModel {
public:
    ChainModel(std::vector<Link> links, Iso3 tool, Vec3 gravity, JointLimits limits);

    /// Load from a JSON or TOML parameter file (format chosen by extension).
    static ChainModel load(const std::string& path);

    int dof() const { return static_cast<int>(links_.size()); }
    const std::vector<Link>& links() const { return links_; }
    const Iso3& tool() const { return tool_; }
    const Vec3& gravity() const { return gravity_; }
    const JointLimits& limits() const { return limits_; }

private:
    std::vector<Link> links_;
    Iso3 tool_;
    Vec3 gravity_;
    JointLimits limits_;
};

struct JointState {
    VectorXd q;
    VectorXd dq;
    VectorXd ddq;

    static JointState zero(int n) {
        return JointState{VectorXd::Zero(n), VectorXd::Zero(n), VectorXd::Zero(n)};
    }
};

/// Table-style joint friction parameters; all entries >= 0.
struct FrictionModel {
    VectorXd c;      // damping, N m s / rad
    VectorXd mu_s;   // static, N m
    VectorXd mu_k;   // Coulomb, N m
    VectorXd mu_v;   // viscous, N m s / rad

    static FrictionModel uniform(int n, double c, double mu_s, double mu_k, double mu_v);
    static FrictionModel none(int n) { return uniform(n, 0, 0, 0, 0); }
};

/// Velocity band below which the static-friction clamp is active.
inline constexpr double kStictionBand = 1e-3;  // rad/s

struct TaskDynamics {
    Mat6 Mbar;       // task-space inertia
    Vec6 Cbar;       // task-space Coriolis/centripetal vector
    Vec6 Gbar;       // task-space gravity vector
    MatrixXd J;      // 6 x n
    MatrixXd Jdot;   // 6 x n
    double sigma_min = 0.0;  // smallest singular value of J
    double lambda = 0.0;     // damping used in the projection
};

struct JointDynamics {
    MatrixXd M;      // n x n inertia
    VectorXd Cqdot;  // Coriolis/centripetal torque vector
    VectorXd G;      // gravity torque vector
};

/// End-effector pose at q (unit quaternion, |xi| = 1 within 1e-12).
Pose forward_kinematics(const ChainModel& model, const VectorXd& q);

/// Geometric Jacobian: xdot = J qdot with xdot = (pdot, omega), world frame.
MatrixXd jacobian(const ChainModel& model, const VectorXd& q);

/// Analytic d/dt of the geometric Jacobian along (q, dq).
MatrixXd jacobian_dot(const ChainModel& model, const VectorXd& q, const VectorXd& dq);

/// Inverse dynamics (RNEA): tau = M(q) ddq + C(q,dq) dq + G(q).
VectorXd inverse_dynamics(const ChainModel& model, const VectorXd& q, const VectorXd& dq,
                          const VectorXd& ddq);

/// M via CRBA, G = RNEA(q,0,0), Cqdot = RNEA(q,dq,0) - G.
JointDynamics joint_space_dynamics(const ChainModel& model, const VectorXd& q,
                                   const VectorXd& dq);

/// Coriolis matrix from Christoffel symbols (central differences of M),
/// consistent with the skew-symmetry of Mdot - 2C.
MatrixXd coriolis_matrix(const ChainModel& model, const VectorXd& q, const VectorXd& dq);

/// Damping schedule for the task-space projection: 0 above kSigmaRampHi,
/// ramping to kLambdaMax at kSigmaRampLo, hard failure below kSigmaFloor.
inline constexpr double kSigmaRampHi = 0.05;
inline constexpr double kSigmaRampLo = 0.005;
inline constexpr double kLambdaMax = 0.05;
inline constexpr double kSigmaFloor = 1e-4;

double damping_for_sigma(double sigma_min);

/// Task-space projection of the joint-space dynamics:
/// Mbar = (J M^-1 J^T + lambda^2 I)^-1, Cbar = Mbar (J M^-1 Cqdot - Jdot dq),
/// Gbar = Mbar J M^-1 G. Throws SingularityError below the sigma floor.
TaskDynamics task_space_dynamics(const ChainModel& model, const VectorXd& q,
                                 const VectorXd& dq);
TaskDynamics task_space_dynamics(const ChainModel& model, const VectorXd& q,
                                 const VectorXd& dq, const JointDynamics& jd);

/// Joint friction torque. `tau_bias` is the net non-friction torque, used by
/// the static clamp inside the stiction band.
VectorXd friction_torque(const FrictionModel& f, const VectorXd& dq,
                         const VectorXd& tau_bias);
VectorXd friction_torque(const FrictionModel& f, const VectorXd& dq);

/// One semi-implicit Euler step of ddq = M^-1 (tau + tau_ext + tau_f - Cqdot - G).
JointState step_forward_dynamics(const ChainModel& model, const FrictionModel& f,
                                 const JointState& state, const VectorXd& tau,
                                 const VectorXd& tau_ext, double dt);

/// Classical RK4 step of the same ODE, for oracle-grade integration.
JointState step_forward_dynamics_rk4(const ChainModel& model, const FrictionModel& f,
                                     const JointState& state, const VectorXd& tau,
                                     const VectorXd& tau_ext, double dt);

/// Total mechanical energy (kinetic + gravitational potential) of the chain.
double total_energy(const ChainModel& model, const VectorXd& q, const VectorXd& dq);

}  // namespace ntstsm
