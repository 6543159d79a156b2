#include "file_values.hpp"

#include <fstream>
#include <sstream>

#include "toml_lite.hpp"

namespace ntstsm {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_structured_file(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
        return toml_lite::parse(text);
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Vec3 vec3_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(what + ": expected an array of 3 numbers");
    }
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

VectorXd vecn_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) {
        throw ConfigError(what + ": expected an array of numbers");
    }
    VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<int>(i)] = j[i].get<double>();
    }
    return v;
}

namespace {

Mat3 rpy_to_matrix(const Vec3& rpy) {
    // Fixed-axis roll-pitch-yaw: R = Rz(yaw) Ry(pitch) Rx(roll)
    return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
            Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
            Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
        .toRotationMatrix();
}

}  // namespace

Iso3 transform_from_json(const json& j) {
    Iso3 t = Iso3::Identity();
    if (j.contains("xyz")) {
        t.translation() = vec3_from_json(j["xyz"], "transform.xyz");
    }
    if (j.contains("rpy")) {
        t.linear() = rpy_to_matrix(vec3_from_json(j["rpy"], "transform.rpy"));
    } else if (j.contains("quat")) {
        const auto& q = j["quat"];
        if (!q.is_array() || q.size() != 4) {
            throw ConfigError("transform.quat: expected [eta, x, y, z]");
        }
        const UnitQuaternion xi(q[0].get<double>(),
                                Vec3(q[1].get<double>(), q[2].get<double>(), q[3].get<double>()));
        t.linear() = xi.to_matrix();
    }
    return t;
}

ChainModel chain_from_json(const json& j) {
    if (!j.contains("links") || !j["links"].is_array() || j["links"].empty()) {
        throw ConfigError("chain file: missing 'links' array");
    }
    std::vector<Link> links;
    for (const auto& lj : j["links"]) {
        Link link;
        if (lj.contains("transform")) link.transform = transform_from_json(lj["transform"]);
        if (lj.contains("axis")) link.axis = vec3_from_json(lj["axis"], "link.axis");
        link.mass = lj.at("mass").get<double>();
        if (lj.contains("com")) link.com = vec3_from_json(lj["com"], "link.com");
        const auto& ij = lj.at("inertia");
        const double ixx = ij.at("ixx").get<double>();
        const double iyy = ij.at("iyy").get<double>();
        const double izz = ij.at("izz").get<double>();
        const double ixy = ij.value("ixy", 0.0);
        const double ixz = ij.value("ixz", 0.0);
        const double iyz = ij.value("iyz", 0.0);
        link.inertia << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
        links.push_back(link);
    }
    Iso3 tool = Iso3::Identity();
    if (j.contains("tool")) tool = transform_from_json(j["tool"]);
    Vec3 gravity(0.0, 0.0, -9.81);
    if (j.contains("gravity")) gravity = vec3_from_json(j["gravity"], "gravity");
    JointLimits limits;
    if (j.contains("limits")) {
        const auto& lj = j["limits"];
        if (lj.contains("q_min")) limits.q_min = vecn_from_json(lj["q_min"], "limits.q_min");
        if (lj.contains("q_max")) limits.q_max = vecn_from_json(lj["q_max"], "limits.q_max");
        if (lj.contains("dq_max")) limits.dq_max = vecn_from_json(lj["dq_max"], "limits.dq_max");
        if (lj.contains("tau_max"))
            limits.tau_max = vecn_from_json(lj["tau_max"], "limits.tau_max");
    }
    return ChainModel(std::move(links), tool, gravity, limits);
}

FrictionModel friction_from_json(const json& j, int dof) {
    auto field = [&](const char* name) -> VectorXd {
        if (!j.contains(name)) {
            throw ConfigError(std::string("friction file: missing '") + name + "'");
        }
        const auto& v = j[name];
        if (v.is_number()) {
            return VectorXd::Constant(dof, v.get<double>());
        }
        VectorXd out = vecn_from_json(v, name);
        if (out.size() != dof) {
            throw ConfigError(std::string("friction file: '") + name + "' size mismatch");
        }
        return out;
    };
    FrictionModel f;
    f.c = field("c");
    f.mu_s = field("mu_s");
    f.mu_k = field("mu_k");
    f.mu_v = field("mu_v");
    if (f.c.minCoeff() < 0 || f.mu_s.minCoeff() < 0 || f.mu_k.minCoeff() < 0 ||
        f.mu_v.minCoeff() < 0) {
        throw ConfigError("friction file: entries must be >= 0");
    }
    return f;
}

}  // namespace ntstsm
