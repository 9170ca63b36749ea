#pragma once

#include <cstdint>
#include <vector>

#include "kcgg/network.hpp"
#include "kcgg/normalizer.hpp"
#include "kcgg/schedule.hpp"
#include "kcgg/trajectory.hpp"

namespace kcgg {

struct TrainOptions {
    std::size_t epochs = 400;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    /// Adam moment coefficients. Plain momentum SGD stalls two orders of
    /// magnitude short of overfitting a single trajectory at any stable
    /// learning rate, so the optimizer is Adam.
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    /// Cosine decay of the learning rate down to this fraction of the
    /// initial rate at the final epoch (1.0 = constant rate).
    double final_lr_fraction = 0.01;
    /// Global gradient-norm clip; 0 disables.
    double grad_clip = 1.0;
    /// Fraction of samples trained with the label replaced by "none", so the
    /// same model supports unconditioned sampling.
    double cond_dropout = 0.2;
    std::uint64_t seed = 0;
};

/// Epsilon-matching training: per sample draw a random step i and noise z,
/// noise the normalized trajectory in closed form, regress the prediction on
/// z. The reported loss is the batch mean of ||z_theta - z||^2 (summed over
/// trajectory entries), so an untrained zero-output net scores about D.
///
/// labels holds one condition id per dataset element (-1 = none). Returns
/// the per-epoch mean loss. Deterministic given the seed. Throws on an empty
/// dataset and aborts with a diagnostic if the loss goes non-finite.
std::vector<double> train(ScoreNetwork& net, const std::vector<Trajectory>& dataset,
                          const std::vector<int>& labels, const NoiseSchedule& schedule,
                          const Normalizer& normalizer, const TrainOptions& options);

} // namespace kcgg
