#include "ntstsm/rigidbody.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "file_values.hpp"

namespace ntstsm {

namespace {

struct FramePass {
    std::vector<Iso3> X;   // world pose of frame i (after joint rotation)
    std::vector<Vec3> z;   // world joint axis
    std::vector<Vec3> o;   // world origin of frame i
    Iso3 ee;               // world pose of the tool frame
};

FramePass compute_frames(const ChainModel& model, const VectorXd& q) {
    const int n = model.dof();
    FramePass fp;
    fp.X.resize(n);
    fp.z.resize(n);
    fp.o.resize(n);
    Iso3 X = Iso3::Identity();
    for (int i = 0; i < n; ++i) {
        const Link& link = model.links()[i];
        X = X * link.transform;
        X.rotate(Eigen::AngleAxisd(q[i], link.axis));
        fp.X[i] = X;
        fp.z[i] = X.linear() * link.axis;
        fp.o[i] = X.translation();
    }
    fp.ee = X * model.tool();
    return fp;
}

void check_finite(const VectorXd& v, const char* what) {
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string("non-finite input: ") + what);
    }
}

}  // namespace

ChainModel::ChainModel(std::vector<Link> links, Iso3 tool, Vec3 gravity, JointLimits limits)
    : links_(std::move(links)), tool_(std::move(tool)), gravity_(std::move(gravity)),
      limits_(std::move(limits)) {
    if (links_.empty()) {
        throw ConfigError("ChainModel: chain has no links");
    }
    for (std::size_t i = 0; i < links_.size(); ++i) {
        Link& link = links_[i];
        if (!(link.mass > 0.0)) {
            throw ConfigError("ChainModel: link " + std::to_string(i) + " mass must be > 0");
        }
        if ((link.inertia - link.inertia.transpose()).norm() > 1e-9) {
            throw ConfigError("ChainModel: link " + std::to_string(i) +
                              " inertia is not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Mat3> eig(link.inertia);
        if (eig.eigenvalues().minCoeff() <= 0.0) {
            throw ConfigError("ChainModel: link " + std::to_string(i) +
                              " inertia is not positive definite");
        }
        const double an = link.axis.norm();
        if (an < 1e-12) {
            throw ConfigError("ChainModel: link " + std::to_string(i) + " axis is zero");
        }
        link.axis /= an;
    }
    const int n = dof();
    auto fit = [n](VectorXd& v, double fill) {
        if (v.size() == 0) v = VectorXd::Constant(n, fill);
        if (v.size() != n) throw ConfigError("ChainModel: limit vector size mismatch");
    };
    fit(limits_.q_min, -1e9);
    fit(limits_.q_max, 1e9);
    fit(limits_.dq_max, 1e9);
    fit(limits_.tau_max, 1e9);
}

ChainModel ChainModel::load(const std::string& path) {
    return chain_from_json(load_structured_file(path));
}

FrictionModel FrictionModel::uniform(int n, double c, double mu_s, double mu_k, double mu_v) {
    FrictionModel f;
    f.c = VectorXd::Constant(n, c);
    f.mu_s = VectorXd::Constant(n, mu_s);
    f.mu_k = VectorXd::Constant(n, mu_k);
    f.mu_v = VectorXd::Constant(n, mu_v);
    return f;
}

Pose forward_kinematics(const ChainModel& model, const VectorXd& q) {
    check_finite(q, "q");
    const FramePass fp = compute_frames(model, q);
    Pose pose;
    pose.p = fp.ee.translation();
    pose.xi = UnitQuaternion::from_matrix(fp.ee.linear());
    return pose;
}

MatrixXd jacobian(const ChainModel& model, const VectorXd& q) {
    check_finite(q, "q");
    const int n = model.dof();
    const FramePass fp = compute_frames(model, q);
    const Vec3 p = fp.ee.translation();
    MatrixXd J(6, n);
    for (int i = 0; i < n; ++i) {
        J.col(i).head<3>() = fp.z[i].cross(p - fp.o[i]);
        J.col(i).tail<3>() = fp.z[i];
    }
    return J;
}

MatrixXd jacobian_dot(const ChainModel& model, const VectorXd& q, const VectorXd& dq) {
    check_finite(q, "q");
    check_finite(dq, "dq");
    const int n = model.dof();
    const FramePass fp = compute_frames(model, q);
    const Vec3 p = fp.ee.translation();

    // Sweep once to get, per joint, the angular velocity of the parent link
    // and the linear velocity of the frame origin.
    std::vector<Vec3> omega_parent(n), v_origin(n);
    Vec3 omega = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 o_prev = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
        v += omega.cross(fp.o[i] - o_prev);
        omega_parent[i] = omega;
        v_origin[i] = v;
        omega += fp.z[i] * dq[i];
        o_prev = fp.o[i];
    }
    const Vec3 p_dot = v + omega.cross(p - o_prev);

    MatrixXd Jdot(6, n);
    for (int i = 0; i < n; ++i) {
        const Vec3 z_dot = omega_parent[i].cross(fp.z[i]);
        Jdot.col(i).tail<3>() = z_dot;
        Jdot.col(i).head<3>() =
            z_dot.cross(p - fp.o[i]) + fp.z[i].cross(p_dot - v_origin[i]);
    }
    return Jdot;
}

VectorXd inverse_dynamics(const ChainModel& model, const VectorXd& q, const VectorXd& dq,
                          const VectorXd& ddq) {
    check_finite(q, "q");
    check_finite(dq, "dq");
    check_finite(ddq, "ddq");
    const int n = model.dof();
    const FramePass fp = compute_frames(model, q);

    // Outward pass in the world frame; gravity enters as a base acceleration.
    std::vector<Vec3> omega(n), alpha(n), a_com(n), r_com(n);
    std::vector<Mat3> I_w(n);
    Vec3 w_p = Vec3::Zero();
    Vec3 al_p = Vec3::Zero();
    Vec3 a_p = -model.gravity();
    Vec3 o_p = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
        const Link& link = model.links()[i];
        const Vec3 r = fp.o[i] - o_p;
        const Vec3 a_o = a_p + al_p.cross(r) + w_p.cross(w_p.cross(r));
        const Vec3 w = w_p + fp.z[i] * dq[i];
        const Vec3 al = al_p + fp.z[i] * ddq[i] + w_p.cross(fp.z[i] * dq[i]);
        r_com[i] = fp.X[i].linear() * link.com;
        a_com[i] = a_o + al.cross(r_com[i]) + w.cross(w.cross(r_com[i]));
        I_w[i] = fp.X[i].linear() * link.inertia * fp.X[i].linear().transpose();
        omega[i] = w;
        alpha[i] = al;
        w_p = w;
        al_p = al;
        a_p = a_o;
        o_p = fp.o[i];
    }

    // Inward pass: accumulate wrenches about each joint origin.
    VectorXd tau(n);
    Vec3 f_child = Vec3::Zero();
    Vec3 n_child = Vec3::Zero();
    for (int i = n - 1; i >= 0; --i) {
        const Link& link = model.links()[i];
        const Vec3 F = link.mass * a_com[i];
        const Vec3 N = I_w[i] * alpha[i] + omega[i].cross(I_w[i] * omega[i]);
        Vec3 f = F + f_child;
        Vec3 nm = N + n_child + r_com[i].cross(F);
        if (i + 1 < n) {
            nm += (fp.o[i + 1] - fp.o[i]).cross(f_child);
        }
        tau[i] = fp.z[i].dot(nm);
        f_child = f;
        n_child = nm;
    }
    return tau;
}

namespace {

MatrixXd crba(const ChainModel& model, const FramePass& fp) {
    const int n = model.dof();
    MatrixXd M = MatrixXd::Zero(n, n);

    // Composite body of links i..n-1, maintained inward.
    double m_c = 0.0;
    Vec3 p_c = Vec3::Zero();
    Mat3 I_c = Mat3::Zero();
    auto shift = [](double m, const Vec3& d) -> Mat3 {
        return m * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
    };
    for (int i = n - 1; i >= 0; --i) {
        const Link& link = model.links()[i];
        const Vec3 p_i = fp.o[i] + fp.X[i].linear() * link.com;
        const Mat3 I_i = fp.X[i].linear() * link.inertia * fp.X[i].linear().transpose();
        const double m_new = m_c + link.mass;
        const Vec3 p_new = (m_c * p_c + link.mass * p_i) / m_new;
        I_c = I_c + shift(m_c, p_c - p_new) + I_i + shift(link.mass, p_i - p_new);
        m_c = m_new;
        p_c = p_new;

        // Unit acceleration of joint i acting on the composite body.
        const Vec3 F = m_c * fp.z[i].cross(p_c - fp.o[i]);
        const Vec3 N = I_c * fp.z[i];
        for (int j = i; j >= 0; --j) {
            M(j, i) = fp.z[j].dot(N + (p_c - fp.o[j]).cross(F));
            M(i, j) = M(j, i);
        }
    }
    return M;
}

}  // namespace

JointDynamics joint_space_dynamics(const ChainModel& model, const VectorXd& q,
                                   const VectorXd& dq) {
    const FramePass fp = compute_frames(model, q);
    JointDynamics jd;
    jd.M = crba(model, fp);
    jd.G = inverse_dynamics(model, q, VectorXd::Zero(model.dof()),
                            VectorXd::Zero(model.dof()));
    jd.Cqdot = inverse_dynamics(model, q, dq, VectorXd::Zero(model.dof())) - jd.G;
    return jd;
}

MatrixXd coriolis_matrix(const ChainModel& model, const VectorXd& q, const VectorXd& dq) {
    const int n = model.dof();
    const double h = 1e-5;
    // dM[k] = dM/dq_k by central differences
    std::vector<MatrixXd> dM(n);
    for (int k = 0; k < n; ++k) {
        VectorXd qp = q, qm = q;
        qp[k] += h;
        qm[k] -= h;
        const FramePass fpp = compute_frames(model, qp);
        const FramePass fpm = compute_frames(model, qm);
        dM[k] = (crba(model, fpp) - crba(model, fpm)) / (2.0 * h);
    }
    MatrixXd C = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double cij = 0.0;
            for (int k = 0; k < n; ++k) {
                cij += 0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * dq[k];
            }
            C(i, j) = cij;
        }
    }
    return C;
}

double damping_for_sigma(double sigma_min) {
    if (sigma_min >= kSigmaRampHi) return 0.0;
    if (sigma_min <= kSigmaRampLo) return kLambdaMax;
    return kLambdaMax * (kSigmaRampHi - sigma_min) / (kSigmaRampHi - kSigmaRampLo);
}

TaskDynamics task_space_dynamics(const ChainModel& model, const VectorXd& q,
                                 const VectorXd& dq) {
    return task_space_dynamics(model, q, dq, joint_space_dynamics(model, q, dq));
}

TaskDynamics task_space_dynamics(const ChainModel& model, const VectorXd& q,
                                 const VectorXd& dq, const JointDynamics& jd) {
    if (model.dof() < 6) {
        throw SingularityError("task_space_dynamics: chain has fewer than 6 joints");
    }
    TaskDynamics td;
    td.J = jacobian(model, q);
    td.Jdot = jacobian_dot(model, q, dq);

    Eigen::JacobiSVD<MatrixXd> svd(td.J);
    td.sigma_min = svd.singularValues().minCoeff();
    if (td.sigma_min < kSigmaFloor) {
        throw SingularityError("task_space_dynamics: sigma_min(J) = " +
                               std::to_string(td.sigma_min) + " below hard floor");
    }
    td.lambda = damping_for_sigma(td.sigma_min);

    const Eigen::LDLT<MatrixXd> Mldlt(jd.M);
    const MatrixXd MinvJt = Mldlt.solve(td.J.transpose());     // n x 6
    Mat6 A = td.J * MinvJt + td.lambda * td.lambda * Mat6::Identity();
    A = 0.5 * (A + A.transpose());
    td.Mbar = A.llt().solve(Mat6::Identity());
    td.Mbar = 0.5 * (td.Mbar + td.Mbar.transpose());
    td.Cbar = td.Mbar * (MinvJt.transpose() * jd.Cqdot - td.Jdot * dq);
    td.Gbar = td.Mbar * (MinvJt.transpose() * jd.G);
    return td;
}

VectorXd friction_torque(const FrictionModel& f, const VectorXd& dq,
                         const VectorXd& tau_bias) {
    const int n = static_cast<int>(dq.size());
    VectorXd tau_f(n);
    for (int i = 0; i < n; ++i) {
        double t = -(f.c[i] + f.mu_v[i]) * dq[i] - f.mu_k[i] * std::tanh(dq[i] / kStictionBand);
        if (std::abs(dq[i]) < kStictionBand) {
            const double hold = std::min(std::abs(tau_bias[i]), f.mu_s[i]);
            t -= (tau_bias[i] > 0.0 ? hold : (tau_bias[i] < 0.0 ? -hold : 0.0));
        }
        tau_f[i] = t;
    }
    return tau_f;
}

VectorXd friction_torque(const FrictionModel& f, const VectorXd& dq) {
    return friction_torque(f, dq, VectorXd::Zero(dq.size()));
}

namespace {

VectorXd forward_accel(const ChainModel& model, const FrictionModel& f, const VectorXd& q,
                       const VectorXd& dq, const VectorXd& tau, const VectorXd& tau_ext) {
    const JointDynamics jd = joint_space_dynamics(model, q, dq);
    const VectorXd bias = tau + tau_ext - jd.Cqdot - jd.G;
    const VectorXd tau_f = friction_torque(f, dq, bias);
    return jd.M.ldlt().solve(bias + tau_f);
}

}  // namespace

JointState step_forward_dynamics(const ChainModel& model, const FrictionModel& f,
                                 const JointState& state, const VectorXd& tau,
                                 const VectorXd& tau_ext, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_forward_dynamics: dt must be > 0");
    }
    JointState next;
    next.ddq = forward_accel(model, f, state.q, state.dq, tau, tau_ext);
    next.dq = state.dq + dt * next.ddq;
    next.q = state.q + dt * next.dq;
    if (!next.q.allFinite() || !next.dq.allFinite() || !next.ddq.allFinite()) {
        throw IntegrationError("step_forward_dynamics: non-finite state");
    }
    return next;
}

JointState step_forward_dynamics_rk4(const ChainModel& model, const FrictionModel& f,
                                     const JointState& state, const VectorXd& tau,
                                     const VectorXd& tau_ext, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_forward_dynamics_rk4: dt must be > 0");
    }
    auto accel = [&](const VectorXd& q, const VectorXd& dq) {
        return forward_accel(model, f, q, dq, tau, tau_ext);
    };
    const VectorXd k1q = state.dq;
    const VectorXd k1v = accel(state.q, state.dq);
    const VectorXd k2q = state.dq + 0.5 * dt * k1v;
    const VectorXd k2v = accel(state.q + 0.5 * dt * k1q, state.dq + 0.5 * dt * k1v);
    const VectorXd k3q = state.dq + 0.5 * dt * k2v;
    const VectorXd k3v = accel(state.q + 0.5 * dt * k2q, state.dq + 0.5 * dt * k2v);
    const VectorXd k4q = state.dq + dt * k3v;
    const VectorXd k4v = accel(state.q + dt * k3q, state.dq + dt * k3v);

    JointState next;
    next.q = state.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    next.dq = state.dq + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    next.ddq = k1v;
    if (!next.q.allFinite() || !next.dq.allFinite()) {
        throw IntegrationError("step_forward_dynamics_rk4: non-finite state");
    }
    return next;
}

double total_energy(const ChainModel& model, const VectorXd& q, const VectorXd& dq) {
    const JointDynamics jd = joint_space_dynamics(model, q, dq);
    const double kinetic = 0.5 * dq.dot(jd.M * dq);
    const FramePass fp = compute_frames(model, q);
    double potential = 0.0;
    for (int i = 0; i < model.dof(); ++i) {
        const Vec3 p_com = fp.o[i] + fp.X[i].linear() * model.links()[i].com;
        potential -= model.links()[i].mass * model.gravity().dot(p_com);
    }
    return kinetic + potential;
}

}  // namespace ntstsm
