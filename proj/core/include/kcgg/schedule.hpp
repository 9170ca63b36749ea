#pragma once

#include <cstddef>
#include <vector>

#include "kcgg/tensor.hpp"

namespace kcgg {

/// Everything one denoising step needs from the schedule. alpha_bar_prev is
/// alpha_bar[i-1] with the i=0 convention alpha_bar[-1] = 1, which makes the
/// final step noiseless (posterior_sigma = 0).
struct ScheduleStep {
    std::size_t index = 0;
    double beta = 0.0;
    double alpha = 1.0;
    double alpha_bar = 1.0;
    double alpha_bar_prev = 1.0;
    double posterior_sigma = 0.0;
    /// Value fed to the network's time embedding: the step index in the
    /// schedule the network was trained on (survives re-striding).
    double time_input = 0.0;
};

/// Coefficients of the tau0-form posterior mean
///   mu = coeff_tau_i * tau_i + coeff_tau0 * tau0_hat, std sigma.
struct PosteriorCoeffs {
    double coeff_tau_i = 0.0;
    double coeff_tau0 = 0.0;
    double sigma = 0.0;
};

/// Discrete variance-preserving noise schedule. beta/alpha/alpha_bar are the
/// DDPM quantities; posterior_sigma[i]^2 = beta_i (1 - alpha_bar_{i-1}) /
/// (1 - alpha_bar_i).
struct NoiseSchedule {
    std::size_t T = 0;
    std::vector<double> beta;
    std::vector<double> alpha;
    std::vector<double> alpha_bar;
    std::vector<double> posterior_sigma;
    std::vector<double> time_input;

    /// Cosine schedule: alpha_bar_i = f((i+1)/T) / f(0) with
    /// f(u) = cos^2(((u + s) / (1 + s)) * pi/2), s = 0.008. Per-step betas are
    /// clipped to <= 0.999 and alpha_bar re-accumulated from the clipped
    /// values. Throws ConfigError for T < 2.
    static NoiseSchedule cosine(std::size_t steps);

    /// Coarser schedule over new_T evenly spaced indices of this one
    /// (endpoints included), with betas recomputed from the alpha_bar ratios.
    /// time_input entries keep the original indices so a trained network sees
    /// familiar time embeddings. new_T == T returns *this unchanged.
    NoiseSchedule restride(std::size_t new_T) const;

    ScheduleStep step(std::size_t i) const;

    /// Checks the structural invariants (monotonicity, endpoint bounds, beta
    /// range, alpha_bar == cumprod(alpha)). Throws ConfigError on violation.
    void validate() const;
};

PosteriorCoeffs posterior_coefficients(const NoiseSchedule& schedule, std::size_t i);

/// Closed-form forward noising tau_i = sqrt(alpha_bar_i) tau_0 +
/// sqrt(1 - alpha_bar_i) z. Throws on index or shape mismatch.
Tensor forward_noise(const NoiseSchedule& schedule, const Tensor& tau0, std::size_t i,
                     const Tensor& z);

} // namespace kcgg
