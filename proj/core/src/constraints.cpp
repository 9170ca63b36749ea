#include "kcgg/constraints.hpp"

#include <limits>
#include <string>

#include "kcgg/errors.hpp"

namespace kcgg {

void StrikeConstraint::validate(std::size_t num_states) const {
    if (t_start > t_end) {
        throw ConfigError("StrikeConstraint: window start " + std::to_string(t_start) +
                          " exceeds end " + std::to_string(t_end));
    }
    if (t_end >= num_states) {
        throw ConfigError("StrikeConstraint: window end " + std::to_string(t_end) +
                          " outside horizon of " + std::to_string(num_states) + " states");
    }
    for (std::size_t t = t_start; t <= t_end; ++t) {
        if (targets.find(t) == targets.end()) {
            throw ConfigError("StrikeConstraint: missing target for window timestep " +
                              std::to_string(t));
        }
    }
    if (!(weight >= 0.0)) throw ConfigError("StrikeConstraint: weight must be >= 0");
}

namespace {

void check_layout(const StrikeConstraint& c, std::span<const double> flat, std::size_t state_dim) {
    if (state_dim == 0 || flat.size() % state_dim != 0) {
        throw ShapeError("strike cost: trajectory length " + std::to_string(flat.size()) +
                         " is not a multiple of state_dim " + std::to_string(state_dim));
    }
    c.validate(flat.size() / state_dim);
}

double squared_distance(const Vec2& a, const Vec2& b) {
    double dx = a[0] - b[0];
    double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

} // namespace

std::size_t strike_argmin(const StrikeConstraint& constraint, const ArmSpec& spec,
                          std::span<const double> traj_flat, std::size_t state_dim) {
    check_layout(constraint, traj_flat, state_dim);
    const std::size_t dof = state_dim / 2;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_t = constraint.t_start;
    for (std::size_t t = constraint.t_start; t <= constraint.t_end; ++t) {
        std::span<const double> q{traj_flat.data() + t * state_dim, dof};
        double d2 = squared_distance(forward_kinematics(spec, q), constraint.targets.at(t));
        if (d2 < best) {
            best = d2;
            best_t = t;
        }
    }
    return best_t;
}

double strike_cost_value(const StrikeConstraint& constraint, const ArmSpec& spec,
                         std::span<const double> traj_flat, std::size_t state_dim) {
    std::size_t t = strike_argmin(constraint, spec, traj_flat, state_dim);
    const std::size_t dof = state_dim / 2;
    std::span<const double> q{traj_flat.data() + t * state_dim, dof};
    return constraint.weight *
           squared_distance(forward_kinematics(spec, q), constraint.targets.at(t));
}

double strike_cost_value(const StrikeConstraint& constraint, const ArmSpec& spec,
                         const Trajectory& traj) {
    return strike_cost_value(constraint, spec, traj.states, traj.state_dim);
}

ad::Value strike_cost_node(const StrikeConstraint& constraint, const ArmSpec& spec, ad::Graph& g,
                           ad::Value traj_flat, std::size_t state_dim) {
    const Tensor& tv = traj_flat.tensor();
    if (tv.rank() != 1) {
        throw ShapeError("strike_cost_node: trajectory node must be rank 1, got " + tv.shape_str());
    }
    std::size_t t = strike_argmin(constraint, spec, tv.values(), state_dim);

    const std::size_t dof = state_dim / 2;
    ad::Value q = ad::segment(traj_flat, t * state_dim, dof);
    auto [x, y] = forward_kinematics(spec, g, q);
    const Vec2& b = constraint.targets.at(t);
    ad::Value dx = ad::sub(x, g.constant(Tensor::scalar(b[0])));
    ad::Value dy = ad::sub(y, g.constant(Tensor::scalar(b[1])));
    return ad::scale(ad::add(ad::mul(dx, dx), ad::mul(dy, dy)), constraint.weight);
}

} // namespace kcgg
