#include "kcgg/normalizer.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "kcgg/errors.hpp"

namespace kcgg {

Normalizer Normalizer::fit(const std::vector<Trajectory>& dataset, double margin) {
    if (dataset.empty()) throw ConfigError("Normalizer::fit: empty dataset");
    const std::size_t d = dataset.front().state_dim;
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (const Trajectory& traj : dataset) {
        if (traj.state_dim != d) {
            throw ShapeError("Normalizer::fit: mixed state dimensions in dataset");
        }
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            double v = traj.states[i];
            std::size_t c = i % d;
            lo[c] = std::min(lo[c], v);
            hi[c] = std::max(hi[c], v);
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        double range = hi[c] - lo[c];
        if (range <= 0.0) {
            lo[c] -= 0.5;
            hi[c] += 0.5;
        } else {
            lo[c] -= margin * range;
            hi[c] += margin * range;
        }
    }
    return from_bounds(std::move(lo), std::move(hi));
}

Normalizer Normalizer::identity(std::size_t state_dim) {
    return from_bounds(std::vector<double>(state_dim, -1.0), std::vector<double>(state_dim, 1.0));
}

Normalizer Normalizer::from_bounds(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size() || lo.empty()) {
        throw ConfigError("Normalizer: lo/hi bounds must be non-empty and equal length");
    }
    for (std::size_t c = 0; c < lo.size(); ++c) {
        if (!(lo[c] < hi[c])) {
            throw ConfigError("Normalizer: lo must be < hi at dimension " + std::to_string(c));
        }
    }
    Normalizer n;
    n.lo_ = std::move(lo);
    n.hi_ = std::move(hi);
    return n;
}

void Normalizer::normalize(std::span<double> flat) const {
    const std::size_t d = dim();
    if (flat.size() % d != 0) {
        throw ShapeError("Normalizer::normalize: buffer size not a multiple of dim");
    }
    for (std::size_t i = 0; i < flat.size(); ++i) {
        std::size_t c = i % d;
        flat[i] = 2.0 * (flat[i] - lo_[c]) / (hi_[c] - lo_[c]) - 1.0;
    }
}

void Normalizer::denormalize(std::span<double> flat) const {
    const std::size_t d = dim();
    if (flat.size() % d != 0) {
        throw ShapeError("Normalizer::denormalize: buffer size not a multiple of dim");
    }
    for (std::size_t i = 0; i < flat.size(); ++i) {
        std::size_t c = i % d;
        flat[i] = lo_[c] + (flat[i] + 1.0) * 0.5 * (hi_[c] - lo_[c]);
    }
}

std::vector<double> Normalizer::normalized(const Trajectory& traj) const {
    std::vector<double> flat = traj.states;
    normalize(flat);
    return flat;
}

Trajectory Normalizer::denormalized(std::span<const double> flat, double dt) const {
    Trajectory traj;
    traj.state_dim = dim();
    traj.dt = dt;
    traj.states.assign(flat.begin(), flat.end());
    denormalize(traj.states);
    return traj;
}

Tensor Normalizer::flat_half_range(std::size_t num_states) const {
    const std::size_t d = dim();
    Tensor t = Tensor::zeros({num_states * d});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * (hi_[i % d] - lo_[i % d]);
    return t;
}

Tensor Normalizer::flat_center(std::size_t num_states) const {
    const std::size_t d = dim();
    Tensor t = Tensor::zeros({num_states * d});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * (hi_[i % d] + lo_[i % d]);
    return t;
}

} // namespace kcgg
