#pragma once

#include <optional>
#include <string>

#include "kcgg/airhockey.hpp"
#include "kcgg/checkpoint.hpp"
#include "kcgg/demo.hpp"
#include "kcgg/guidance.hpp"
#include "kcgg/samplers.hpp"

namespace kcgg {

/// Plans by sampling the trained diffusion model with the configured method.
/// The episode's strike window becomes the guidance cost; without a window
/// the sampler runs unconstrained (infeasible episodes). The per-call sampler
/// seed mixes the config seed with the episode seed.
class DiffusionPlanner final : public Planner {
public:
    DiffusionPlanner(const ModelBundle& bundle, ArmSpec arm, SamplerConfig config,
                     int cond_label = -1);

    PlanResult plan(const PuckState& puck, const std::optional<StrikeConstraint>& window,
                    std::uint64_t episode_seed) const override;

private:
    const ModelBundle& bundle_;
    ArmSpec arm_;
    SamplerConfig config_;
    int cond_label_;
};

/// Plans with the scripted expert (sanity bound on the episode set). Falls
/// back to holding home when the expert rejects the episode.
class ExpertPlanner final : public Planner {
public:
    ExpertPlanner(const TableSpec& table, const ArmSpec& arm, const EpisodeParams& params,
                  StrokeStyle style);

    PlanResult plan(const PuckState& puck, const std::optional<StrikeConstraint>& window,
                    std::uint64_t episode_seed) const override;

private:
    const TableSpec& table_;
    const ArmSpec& arm_;
    EpisodeParams params_;
    StrokeStyle style_;
};

/// Holds the home pose for the whole horizon (the do-nothing floor).
class NullPlanner final : public Planner {
public:
    NullPlanner(const ArmSpec& arm, const EpisodeParams& params);

    PlanResult plan(const PuckState&, const std::optional<StrikeConstraint>&,
                    std::uint64_t) const override;

private:
    Trajectory hold_;
};

/// Hold-home trajectory used by NullPlanner and expert fallbacks.
Trajectory hold_home_trajectory(const ArmSpec& arm, const EpisodeParams& params);

} // namespace kcgg
