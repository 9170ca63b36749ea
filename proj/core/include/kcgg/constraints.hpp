#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "kcgg/autodiff.hpp"
#include "kcgg/kinematics.hpp"
#include "kcgg/trajectory.hpp"

namespace kcgg {

/// Strike cost: weight * min over a timestep window of the squared distance
/// between the end-effector and predicted object positions b_t.
struct StrikeConstraint {
    std::map<std::size_t, Vec2> targets; // t -> b_t
    std::size_t t_start = 0;
    std::size_t t_end = 0; // inclusive
    double weight = 1.0;   // lambda

    /// Window inside [0, num_states) and every t in it has a target.
    void validate(std::size_t num_states) const;
};

/// Smallest window timestep achieving the minimal squared end-effector
/// distance (the hard-min subgradient choice; ties break to the smaller t).
std::size_t strike_argmin(const StrikeConstraint& constraint, const ArmSpec& spec,
                          std::span<const double> traj_flat, std::size_t state_dim);

/// Forward-only cost of a physical trajectory (batch filter, reporting).
double strike_cost_value(const StrikeConstraint& constraint, const ArmSpec& spec,
                         std::span<const double> traj_flat, std::size_t state_dim);
double strike_cost_value(const StrikeConstraint& constraint, const ArmSpec& spec,
                         const Trajectory& traj);

/// Differentiable cost of a flattened physical trajectory node: evaluates the
/// window forward-only, picks the argmin timestep, and builds the FK graph at
/// that timestep only, so the gradient is zero outside the argmin joint
/// positions.
ad::Value strike_cost_node(const StrikeConstraint& constraint, const ArmSpec& spec, ad::Graph& g,
                           ad::Value traj_flat, std::size_t state_dim);

} // namespace kcgg
