#pragma once

#include <string>
#include <vector>

#include "kcgg/network.hpp"
#include "kcgg/normalizer.hpp"
#include "kcgg/schedule.hpp"

namespace kcgg {

/// Trained model plus everything needed to sample with it.
struct ModelBundle {
    ScoreNetwork net;
    Normalizer normalizer;
    NoiseSchedule schedule;
    std::vector<std::string> condition_labels;
    std::size_t num_states = 0;
    std::size_t state_dim = 0;
    double dt = 0.02;

    /// Label id for a style name, -1 for an empty string (unconditioned).
    /// Throws on an unknown name.
    int label_id(const std::string& name) const;
};

/// Checkpoint layout: magic "KCGGNET1", u64 little-endian header length,
/// JSON header (architecture, normalizer bounds, schedule parameters,
/// condition vocabulary, trajectory layout), then all weight tensors as
/// 64-bit little-endian floats in declaration order.
void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(const std::string& path);

} // namespace kcgg
