#include "kcgg/samplers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "kcgg/errors.hpp"

namespace kcgg {

const char* to_string(Method m) {
    switch (m) {
        case Method::Unconstrained: return "unconstrained";
        case Method::Projection: return "projection";
        case Method::Kcgg: return "kcgg";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    if (name == "unconstrained") return Method::Unconstrained;
    if (name == "projection") return Method::Projection;
    if (name == "kcgg") return Method::Kcgg;
    throw ConfigError("unknown sampling method '" + name + "'");
}

void SamplerConfig::validate() const {
    if (batch_size < 1) throw ConfigError("SamplerConfig: batch_size must be >= 1");
    if (!(eta >= 0.0)) throw ConfigError("SamplerConfig: eta must be >= 0");
    if (T == 1) throw ConfigError("SamplerConfig: T must be 0 (native) or >= 2");
}

nlohmann::json BatchDiagnostics::to_json() const {
    return nlohmann::json{{"method", method},
                          {"T", T},
                          {"B", B},
                          {"eta", eta},
                          {"seed", seed},
                          {"ms_per_step", ms_per_step},
                          {"final_costs", final_costs},
                          {"chosen_index", chosen_index},
                          {"batch_filter", batch_filter}};
}

namespace {

std::vector<int> cond_batch(int cond_label, std::size_t batch) {
    return std::vector<int>(batch, cond_label);
}

double clip_entry(double v, double bound) {
    if (bound <= 0.0) return v;
    return std::min(std::max(v, -bound), bound);
}

/// Posterior mean from tau and a (clamped) tau0 estimate.
Tensor posterior_mean(const NoiseSchedule& schedule, std::size_t i, const Tensor& tau,
                      const Tensor& tau0, double tau0_clip) {
    PosteriorCoeffs pc = posterior_coefficients(schedule, i);
    Tensor mu = Tensor::zeros(tau.shape());
    for (std::size_t k = 0; k < tau.size(); ++k) {
        mu[k] = pc.coeff_tau_i * tau[k] + pc.coeff_tau0 * clip_entry(tau0[k], tau0_clip);
    }
    return mu;
}

/// Deterministic part of the unguided step (tau0-form).
Tensor unguided_mean(const ScoreModel& model, const NoiseSchedule& schedule, std::size_t i,
                     const Tensor& tau, const std::vector<int>& cond, double tau0_clip) {
    ScheduleStep st = schedule.step(i);
    Tensor tau0 = predict_tau0(model, tau, st, cond);
    return posterior_mean(schedule, i, tau, tau0, tau0_clip);
}

/// Every method adds posterior noise the same way so that matched seeds give
/// matched streams: exactly D normals per row per step, scaled by the
/// posterior standard deviation (zero at the final step).
void add_posterior_noise(Tensor& mu, const ScheduleStep& st, std::vector<Rng>& streams) {
    const std::size_t rows = mu.rows();
    const std::size_t cols = mu.cols();
    for (std::size_t r = 0; r < rows; ++r) {
        double* out = mu.data() + r * cols;
        Rng& rng = streams[r];
        for (std::size_t c = 0; c < cols; ++c) out[c] += st.posterior_sigma * rng.normal();
    }
}

void check_batch(const Tensor& tau, const ScoreModel& model, const std::vector<Rng>& streams) {
    if (tau.rank() != 2 || tau.shape()[1] != model.dim()) {
        throw ShapeError("sampler step: batch must be (B x " + std::to_string(model.dim()) +
                         "), got " + tau.shape_str());
    }
    if (streams.size() != tau.shape()[0]) {
        throw ShapeError("sampler step: need one noise stream per batch row");
    }
}

} // namespace

Tensor ddpm_step(const ScoreModel& model, const NoiseSchedule& schedule, const Tensor& tau,
                 std::size_t i, const std::vector<int>& cond, std::vector<Rng>& streams,
                 double tau0_clip) {
    check_batch(tau, model, streams);
    Tensor mu = unguided_mean(model, schedule, i, tau, cond, tau0_clip);
    add_posterior_noise(mu, schedule.step(i), streams);
    return mu;
}

Tensor projection_step(const ScoreModel& model, const NoiseSchedule& schedule, const Tensor& tau,
                       std::size_t i, const std::vector<int>& cond, const GuidanceCost& cost,
                       double eta, std::vector<Rng>& streams, double tau0_clip) {
    check_batch(tau, model, streams);
    Tensor mu = unguided_mean(model, schedule, i, tau, cond, tau0_clip);
    if (eta != 0.0) {
        // Gradient of the cost evaluated on the noisy mean itself.
        ad::Graph g;
        ad::Value mv = g.input(mu);
        g.backward(cost.cost_node(g, mv));
        const Tensor& grad = g.grad(mv);
        for (std::size_t k = 0; k < mu.size(); ++k) mu[k] -= eta * grad[k];
    }
    add_posterior_noise(mu, schedule.step(i), streams);
    return mu;
}

Tensor kcgg_step(const ScoreModel& model, const NoiseSchedule& schedule, const Tensor& tau,
                 std::size_t i, const std::vector<int>& cond, const GuidanceCost& cost, double eta,
                 std::vector<Rng>& streams, double tau0_clip, KcggScale scale) {
    check_batch(tau, model, streams);
    ScheduleStep st = schedule.step(i);

    ad::Graph g;
    ad::Value xv = g.input(tau);
    ad::Value tau0 = predict_tau0_node(g, model, xv, st, cond);
    if (tau0_clip > 0.0) tau0 = ad::clamp(tau0, -tau0_clip, tau0_clip);
    Tensor mu = posterior_mean(schedule, i, tau, tau0.tensor(), 0.0);

    if (eta != 0.0) {
        // d c(tau0_hat) / d tau_i: flows through the score model and FK.
        // The cost sees the same (clamped) estimate the mean uses.
        g.backward(cost.cost_node(g, tau0));
        const Tensor& grad = g.grad(xv);
        double w = 1.0;
        switch (scale) {
            case KcggScale::OneMinusAlphaBar: w = 1.0 - st.alpha_bar; break;
            case KcggScale::SqrtOneMinusAlphaBar: w = std::sqrt(1.0 - st.alpha_bar); break;
            case KcggScale::Constant: w = 1.0; break;
        }
        double step_scale = eta * w;
        for (std::size_t k = 0; k < mu.size(); ++k) mu[k] -= step_scale * grad[k];
    }
    add_posterior_noise(mu, st, streams);
    return mu;
}

SampleBatchResult sample_batch(const ScoreModel& model, const NoiseSchedule& schedule,
                               const SamplerConfig& config, int cond_label,
                               const GuidanceCost* cost, const Normalizer* normalizer) {
    config.validate();
    if (config.method != Method::Unconstrained && cost == nullptr) {
        throw ConfigError(std::string("sample_batch: method '") + to_string(config.method) +
                          "' requires a constraint");
    }
    NoiseSchedule strided;
    const NoiseSchedule* sched = &schedule;
    if (config.T != 0 && config.T != schedule.T) {
        strided = schedule.restride(config.T);
        sched = &strided;
    }
    const std::size_t T = sched->T;
    const std::size_t B = config.batch_size;
    const std::size_t D = model.dim();

    Rng base(config.seed, 0x73616d706cULL);
    std::vector<Rng> streams;
    streams.reserve(B);
    for (std::size_t b = 0; b < B; ++b) streams.push_back(base.split(b));

    Tensor tau = Tensor::zeros({B, D});
    for (std::size_t b = 0; b < B; ++b) {
        double* rowp = tau.data() + b * D;
        for (std::size_t c = 0; c < D; ++c) rowp[c] = streams[b].normal();
    }

    std::vector<int> cond = cond_batch(cond_label, B);
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = T; k-- > 0;) {
        switch (config.method) {
            case Method::Unconstrained:
                tau = ddpm_step(model, *sched, tau, k, cond, streams, config.tau0_clip);
                break;
            case Method::Projection:
                tau = projection_step(model, *sched, tau, k, cond, *cost, config.eta, streams,
                                      config.tau0_clip);
                break;
            case Method::Kcgg:
                tau = kcgg_step(model, *sched, tau, k, cond, *cost, config.eta, streams,
                                config.tau0_clip, config.kcgg_scale);
                break;
        }
    }
    auto t1 = std::chrono::steady_clock::now();
    double total_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    SampleBatchResult res;
    res.batch_model = tau;
    res.batch_physical = tau;
    if (normalizer != nullptr) {
        normalizer->denormalize({res.batch_physical.data(), res.batch_physical.size()});
    }

    if (cost != nullptr) {
        res.costs.resize(B);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < B; ++b) {
            res.costs[b] = cost->cost_value({res.batch_physical.data() + b * D, D});
            if (config.batch_filter && res.costs[b] < best) {
                best = res.costs[b];
                res.chosen = b;
            }
        }
    }

    res.diag.method = to_string(config.method);
    res.diag.T = T;
    res.diag.B = B;
    res.diag.eta = config.eta;
    res.diag.seed = config.seed;
    res.diag.ms_per_step = total_ms / static_cast<double>(T);
    res.diag.final_costs = res.costs;
    res.diag.chosen_index = res.chosen;
    res.diag.batch_filter = config.batch_filter;
    return res;
}

std::size_t time_budget_steps(double budget_ms, double ms_per_step) {
    if (!(budget_ms > 0.0)) throw ContractError("time_budget_steps: budget must be positive");
    if (!(ms_per_step > 0.0)) throw ContractError("time_budget_steps: ms_per_step must be positive");
    auto steps = static_cast<std::size_t>(std::floor(budget_ms / ms_per_step));
    while ((static_cast<double>(steps) + 1.0) * ms_per_step <= budget_ms) ++steps;
    while (steps > 0 && static_cast<double>(steps) * ms_per_step > budget_ms) --steps;
    return std::max<std::size_t>(steps, 2);
}

} // namespace kcgg
