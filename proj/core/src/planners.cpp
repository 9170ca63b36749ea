#include "kcgg/planners.hpp"

#include <chrono>

#include "kcgg/errors.hpp"

namespace kcgg {

Trajectory hold_home_trajectory(const ArmSpec& arm, const EpisodeParams& params) {
    const std::size_t n = arm.dof();
    Trajectory traj;
    traj.state_dim = 2 * n;
    traj.dt = params.dt;
    traj.states.assign(params.num_states * traj.state_dim, 0.0);
    for (std::size_t t = 0; t < params.num_states; ++t) {
        auto row = traj.state(t);
        for (std::size_t j = 0; j < n; ++j) row[j] = params.home.q[j];
    }
    return traj;
}

DiffusionPlanner::DiffusionPlanner(const ModelBundle& bundle, ArmSpec arm, SamplerConfig config,
                                   int cond_label)
    : bundle_(bundle), arm_(std::move(arm)), config_(config), cond_label_(cond_label) {
    config_.validate();
    if (cond_label_ >= static_cast<int>(bundle_.condition_labels.size())) {
        throw ConfigError("DiffusionPlanner: condition label out of range");
    }
}

PlanResult DiffusionPlanner::plan(const PuckState&, const std::optional<StrikeConstraint>& window,
                                  std::uint64_t episode_seed) const {
    SamplerConfig cfg = config_;
    cfg.seed = Rng::mix(config_.seed, episode_seed);

    std::optional<StrikeGuidance> guidance;
    const GuidanceCost* cost = nullptr;
    if (window) {
        guidance.emplace(*window, arm_, bundle_.normalizer, bundle_.num_states);
        cost = &*guidance;
    } else if (cfg.method != Method::Unconstrained) {
        // Infeasible episode: no window to guide toward, run unconstrained.
        cfg.method = Method::Unconstrained;
    }

    auto t0 = std::chrono::steady_clock::now();
    SampleBatchResult res = sample_batch(bundle_.net, bundle_.schedule, cfg, cond_label_, cost,
                                         &bundle_.normalizer);
    auto t1 = std::chrono::steady_clock::now();

    PlanResult out;
    out.trajectory.state_dim = bundle_.state_dim;
    out.trajectory.dt = bundle_.dt;
    auto chosen = res.chosen_physical_row();
    out.trajectory.states.assign(chosen.begin(), chosen.end());
    out.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.diag = res.diag;
    return out;
}

ExpertPlanner::ExpertPlanner(const TableSpec& table, const ArmSpec& arm,
                             const EpisodeParams& params, StrokeStyle style)
    : table_(table), arm_(arm), params_(params), style_(style) {}

PlanResult ExpertPlanner::plan(const PuckState& puck, const std::optional<StrikeConstraint>&,
                               std::uint64_t) const {
    auto traj = scripted_expert(table_, arm_, puck, style_, params_);
    PlanResult out;
    out.trajectory = traj ? std::move(*traj) : hold_home_trajectory(arm_, params_);
    return out;
}

NullPlanner::NullPlanner(const ArmSpec& arm, const EpisodeParams& params)
    : hold_(hold_home_trajectory(arm, params)) {}

PlanResult NullPlanner::plan(const PuckState&, const std::optional<StrikeConstraint>&,
                             std::uint64_t) const {
    return PlanResult{hold_, 0.0, std::nullopt};
}

} // namespace kcgg
