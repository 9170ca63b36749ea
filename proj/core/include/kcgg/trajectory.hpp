#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kcgg {

/// Fixed-horizon sequence of arm states [q, qdot], stored row-major as
/// (H+1) x d with d = 2 * dof. The object the diffusion model generates.
struct Trajectory {
    std::size_t state_dim = 0;
    double dt = 0.02;
    std::vector<double> states;

    std::size_t num_states() const { return state_dim ? states.size() / state_dim : 0; }

    std::span<const double> state(std::size_t t) const {
        return {states.data() + t * state_dim, state_dim};
    }
    std::span<double> state(std::size_t t) {
        return {states.data() + t * state_dim, state_dim};
    }
    /// Joint positions of state t (first half of the row).
    std::span<const double> q(std::size_t t) const {
        return {states.data() + t * state_dim, state_dim / 2};
    }
    /// Joint velocities of state t (second half of the row).
    std::span<const double> qdot(std::size_t t) const {
        return {states.data() + t * state_dim + state_dim / 2, state_dim / 2};
    }

    /// Throws on empty, ragged, or non-finite content.
    void validate() const;
};

} // namespace kcgg
