#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "kcgg/autodiff.hpp"
#include "kcgg/tensor.hpp"

namespace kcgg {

using Vec2 = std::array<double, 2>;

/// Planar n-link revolute arm. Link lengths in meters, joint angles in
/// radians, velocities in rad/s.
struct ArmSpec {
    std::vector<double> link_lengths;
    Vec2 base_position{0.0, 0.0};
    std::vector<std::array<double, 2>> joint_limits;   // per-joint [min, max]
    std::vector<double> velocity_limits;               // per-joint |qdot| bound

    std::size_t dof() const { return link_lengths.size(); }
    /// Outer radius of the reachable annulus.
    double reach() const;

    /// Throws ConfigError on non-positive links, inverted limits, or
    /// mismatched per-joint array lengths.
    void validate() const;
};

struct ArmState {
    std::vector<double> q;
    std::vector<double> qdot;
};

/// End-effector position x = base + sum_k L_k (cos(theta_k), sin(theta_k)),
/// theta_k the cumulative joint angle. Throws ShapeError on wrong dimension.
Vec2 forward_kinematics(const ArmSpec& spec, std::span<const double> q);

/// Differentiable FK: q is a rank-1 node of length dof(); returns {x, y}
/// scalar nodes on the same graph, so constraint gradients flow through the
/// kinematic chain.
std::array<ad::Value, 2> forward_kinematics(const ArmSpec& spec, ad::Graph& g, ad::Value q);

/// Analytic Jacobian d(x,y)/dq as a 2 x dof() tensor.
Tensor fk_jacobian(const ArmSpec& spec, std::span<const double> q);

/// Clamps q into joint_limits and qdot into +/- velocity_limits.
ArmState clamp_to_limits(const ArmSpec& spec, const ArmState& state);

} // namespace kcgg
