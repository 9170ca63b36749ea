#include "kcgg/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kcgg/errors.hpp"

namespace kcgg {

double ArmSpec::reach() const {
    double r = 0.0;
    for (double l : link_lengths) r += l;
    return r;
}

void ArmSpec::validate() const {
    if (link_lengths.empty()) throw ConfigError("ArmSpec: at least one link required");
    for (std::size_t i = 0; i < link_lengths.size(); ++i) {
        if (!(link_lengths[i] > 0.0)) {
            throw ConfigError("ArmSpec: link_lengths[" + std::to_string(i) + "] must be > 0");
        }
    }
    if (joint_limits.size() != dof()) {
        throw ConfigError("ArmSpec: joint_limits size " + std::to_string(joint_limits.size()) +
                          " does not match dof " + std::to_string(dof()));
    }
    for (std::size_t i = 0; i < joint_limits.size(); ++i) {
        if (!(joint_limits[i][0] < joint_limits[i][1])) {
            throw ConfigError("ArmSpec: joint_limits[" + std::to_string(i) + "] min must be < max");
        }
    }
    if (velocity_limits.size() != dof()) {
        throw ConfigError("ArmSpec: velocity_limits size " + std::to_string(velocity_limits.size()) +
                          " does not match dof " + std::to_string(dof()));
    }
    for (std::size_t i = 0; i < velocity_limits.size(); ++i) {
        if (!(velocity_limits[i] > 0.0)) {
            throw ConfigError("ArmSpec: velocity_limits[" + std::to_string(i) + "] must be > 0");
        }
    }
}

namespace {
void require_dof(const ArmSpec& spec, std::size_t got) {
    if (got != spec.dof()) {
        throw ShapeError("forward_kinematics: joint vector length " + std::to_string(got) +
                         " does not match arm dof " + std::to_string(spec.dof()));
    }
}
} // namespace

Vec2 forward_kinematics(const ArmSpec& spec, std::span<const double> q) {
    require_dof(spec, q.size());
    double theta = 0.0;
    double x = spec.base_position[0];
    double y = spec.base_position[1];
    for (std::size_t k = 0; k < spec.dof(); ++k) {
        theta += q[k];
        x += spec.link_lengths[k] * std::cos(theta);
        y += spec.link_lengths[k] * std::sin(theta);
    }
    return {x, y};
}

std::array<ad::Value, 2> forward_kinematics(const ArmSpec& spec, ad::Graph& g, ad::Value q) {
    const Tensor& qv = q.tensor();
    if (qv.rank() != 1) throw ShapeError("forward_kinematics: joint node must be rank 1");
    require_dof(spec, qv.size());

    ad::Value x = g.constant(Tensor::scalar(spec.base_position[0]));
    ad::Value y = g.constant(Tensor::scalar(spec.base_position[1]));
    ad::Value theta;
    for (std::size_t k = 0; k < spec.dof(); ++k) {
        ad::Value qk = ad::element(q, k);
        theta = (k == 0) ? qk : ad::add(theta, qk);
        x = ad::add(x, ad::scale(ad::cos(theta), spec.link_lengths[k]));
        y = ad::add(y, ad::scale(ad::sin(theta), spec.link_lengths[k]));
    }
    return {x, y};
}

Tensor fk_jacobian(const ArmSpec& spec, std::span<const double> q) {
    require_dof(spec, q.size());
    const std::size_t n = spec.dof();
    // Cumulative angles first, then dx/dq_j = -sum_{k>=j} L_k sin(theta_k).
    std::vector<double> theta(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += q[k];
        theta[k] = acc;
    }
    Tensor jac = Tensor::zeros({2, n});
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = n; j-- > 0;) {
        sx += spec.link_lengths[j] * std::sin(theta[j]);
        sy += spec.link_lengths[j] * std::cos(theta[j]);
        jac.at(0, j) = -sx;
        jac.at(1, j) = sy;
    }
    return jac;
}

ArmState clamp_to_limits(const ArmSpec& spec, const ArmState& state) {
    ArmState out = state;
    for (std::size_t i = 0; i < spec.dof() && i < out.q.size(); ++i) {
        out.q[i] = std::clamp(out.q[i], spec.joint_limits[i][0], spec.joint_limits[i][1]);
    }
    for (std::size_t i = 0; i < spec.dof() && i < out.qdot.size(); ++i) {
        out.qdot[i] = std::clamp(out.qdot[i], -spec.velocity_limits[i], spec.velocity_limits[i]);
    }
    return out;
}

} // namespace kcgg
