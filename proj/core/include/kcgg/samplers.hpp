#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcgg/guidance.hpp"
#include "kcgg/rng.hpp"
#include "kcgg/schedule.hpp"
#include "kcgg/score_model.hpp"

namespace kcgg {

enum class Method { Unconstrained, Projection, Kcgg };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

enum class KcggScale { OneMinusAlphaBar, SqrtOneMinusAlphaBar, Constant };

struct SamplerConfig {
    Method method = Method::Unconstrained;
    std::size_t T = 0;          // diffusion steps; re-strides the schedule if smaller
    std::size_t batch_size = 16;
    /// Guidance scale. Projection applies eta * grad directly; KCGG applies
    /// eta * w(i) * grad with w per kcgg_scale.
    double eta = 1.0;
    KcggScale kcgg_scale = KcggScale::OneMinusAlphaBar;
    bool batch_filter = true;
    std::uint64_t seed = 0;
    /// Symmetric clamp applied to the tau0 estimate inside every step
    /// (standard denoised-sample clipping; trajectories are normalized into
    /// [-1, 1], so 1.0 is the natural bound). 0 disables, e.g. for problems
    /// that are not normalized.
    double tau0_clip = 1.0;

    void validate() const;
};

/// One record per sample_batch call.
struct BatchDiagnostics {
    std::string method;
    std::size_t T = 0;
    std::size_t B = 0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    double ms_per_step = 0.0;
    std::vector<double> final_costs; // physical-space cost per batch element
    std::size_t chosen_index = 0;
    bool batch_filter = false;

    nlohmann::json to_json() const;
};

/// One unguided reverse step. The mean is the tau0-form posterior (the
/// algebraic equal of the standard step formula), with the tau0 estimate
/// clamped to +/- tau0_clip. streams holds one pre-split generator per batch
/// row; every method consumes exactly D normals per row per step, so matched
/// seeds stay matched across methods.
Tensor ddpm_step(const ScoreModel& model, const NoiseSchedule& schedule, const Tensor& tau,
                 std::size_t i, const std::vector<int>& cond, std::vector<Rng>& streams,
                 double tau0_clip = 1.0);

/// Projection guidance: deterministic unguided mean, then the cost gradient
/// taken on that noisy mean itself, then noise.
Tensor projection_step(const ScoreModel& model, const NoiseSchedule& schedule, const Tensor& tau,
                       std::size_t i, const std::vector<int>& cond, const GuidanceCost& cost,
                       double eta, std::vector<Rng>& streams, double tau0_clip = 1.0);

/// KCGG: same posterior mean, then the cost gradient of c(tau0_hat) taken
/// with respect to the pre-step tau_i, flowing through the score model (and
/// through FK inside the cost), then noise. The gradient path uses the raw
/// tau0 estimate; the clamp only affects the mean.
Tensor kcgg_step(const ScoreModel& model, const NoiseSchedule& schedule, const Tensor& tau,
                 std::size_t i, const std::vector<int>& cond, const GuidanceCost& cost, double eta,
                 std::vector<Rng>& streams, double tau0_clip = 1.0,
                 KcggScale scale = KcggScale::OneMinusAlphaBar);

struct SampleBatchResult {
    Tensor batch_model;       // B x D, model space
    Tensor batch_physical;    // B x D, denormalized
    std::vector<double> costs; // per element (empty without a cost)
    std::size_t chosen = 0;
    BatchDiagnostics diag;

    std::span<const double> chosen_physical_row() const {
        return {batch_physical.data() + chosen * batch_physical.cols(), batch_physical.cols()};
    }
};

/// Batched sampling: B rows from N(0, I), T steps of the configured method,
/// denormalization, then the batch filter (argmin of the forward cost, ties
/// to the lowest index). cost may be null only for unconstrained sampling;
/// normalizer may be null for model-space problems.
SampleBatchResult sample_batch(const ScoreModel& model, const NoiseSchedule& schedule,
                               const SamplerConfig& config, int cond_label,
                               const GuidanceCost* cost, const Normalizer* normalizer);

/// Largest step count fitting the wall-clock budget, floored at 2.
std::size_t time_budget_steps(double budget_ms, double ms_per_step);

} // namespace kcgg
