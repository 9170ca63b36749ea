#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kcgg/tensor.hpp"
#include "kcgg/trajectory.hpp"

namespace kcgg {

/// Maps each state dimension affinely into [-1, 1] using dataset min/max
/// padded by a relative margin. Degenerate (constant) dimensions get a unit
/// half-range centered on the constant.
class Normalizer {
public:
    Normalizer() = default;

    static Normalizer fit(const std::vector<Trajectory>& dataset, double margin = 0.05);
    /// Pass-through normalizer (lo = -1, hi = 1 per dimension).
    static Normalizer identity(std::size_t state_dim);
    static Normalizer from_bounds(std::vector<double> lo, std::vector<double> hi);

    std::size_t dim() const { return lo_.size(); }
    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }

    /// In-place over a flattened (rows x dim) buffer.
    void normalize(std::span<double> flat) const;
    void denormalize(std::span<double> flat) const;

    std::vector<double> normalized(const Trajectory& traj) const;
    Trajectory denormalized(std::span<const double> flat, double dt) const;

    /// Per-entry half-range / center constants tiled over num_states rows;
    /// denormalization of a flattened model-space row is
    /// center + half_range * y, which is how constraint costs decode
    /// trajectories inside the autodiff graph.
    Tensor flat_half_range(std::size_t num_states) const;
    Tensor flat_center(std::size_t num_states) const;

private:
    std::vector<double> lo_;
    std::vector<double> hi_;
};

} // namespace kcgg
