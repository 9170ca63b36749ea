#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "kcgg/constraints.hpp"
#include "kcgg/kinematics.hpp"
#include "kcgg/rng.hpp"
#include "kcgg/samplers.hpp"
#include "kcgg/trajectory.hpp"

namespace kcgg {

/// 2D air-hockey table. x runs from the defended goal (x = 0) to the far
/// side; y is centered, |y| <= width / 2. damping is a per-second velocity
/// decay factor.
struct TableSpec {
    double length = 2.0;
    double width = 1.0;
    double goal_width = 0.25;
    double puck_radius = 0.03;
    double mallet_radius = 0.05;
    double damping = 0.98;
    double defend_line_x = 0.65;

    void validate() const;
};

struct PuckState {
    Vec2 position{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
};

/// One integration tick: exponential damping, constant-velocity advance,
/// specular reflection off the side walls (|y| walls only).
PuckState step_puck(const TableSpec& table, const PuckState& state, double dt);

/// Predicted positions b_t for t = 0..steps-1 (entry 0 is the current
/// position). Deterministic.
std::vector<Vec2> predict_puck(const TableSpec& table, const PuckState& state, std::size_t steps,
                               double dt);

struct StrikeWindowParams {
    double zone_halfwidth = 0.12; // defend zone extent around defend_line_x
    double reach_margin = 0.02;   // stay inside the reachable disc by this much
};

/// Window of plan timesteps where the predicted puck lies inside the arm's
/// reachable annulus intersected with the defend zone; nullopt if the puck
/// never enters it within the horizon.
std::optional<StrikeConstraint> make_strike_window(const TableSpec& table, const ArmSpec& arm,
                                                   const std::vector<Vec2>& prediction,
                                                   const StrikeWindowParams& params = {});

struct TickRecord {
    double time = 0.0;
    PuckState puck;
    ArmState arm;
    Vec2 ee{0.0, 0.0};
    double distance = 0.0;
    bool clamped = false; // plan exceeded a limit at this tick
};

struct EpisodeResult {
    bool feasible = true;
    bool blocked = false;
    std::optional<double> contact_time;
    double min_distance = std::numeric_limits<double>::infinity();
    double plan_latency_ms = 0.0;
    /// Strike cost of the executed plan against the episode's window
    /// (NaN when the episode was infeasible).
    double plan_cost = std::numeric_limits<double>::quiet_NaN();
    std::optional<BatchDiagnostics> diag;
    std::vector<TickRecord> trace;
};

struct PlanResult {
    Trajectory trajectory;
    double latency_ms = 0.0;
    std::optional<BatchDiagnostics> diag;
};

/// Produces a joint-space plan for one episode. Implementations must be
/// usable concurrently (plan() is const).
class Planner {
public:
    virtual ~Planner() = default;
    virtual PlanResult plan(const PuckState& puck,
                            const std::optional<StrikeConstraint>& window,
                            std::uint64_t episode_seed) const = 0;
};

/// Replays a fixed trajectory regardless of the episode (expert replay
/// verification, do-nothing baselines).
class FixedPlanPlanner final : public Planner {
public:
    explicit FixedPlanPlanner(Trajectory plan) : plan_(std::move(plan)) {}
    PlanResult plan(const PuckState&, const std::optional<StrikeConstraint>&,
                    std::uint64_t) const override {
        return PlanResult{plan_, 0.0, std::nullopt};
    }

private:
    Trajectory plan_;
};

struct EpisodeParams {
    double dt = 0.02;
    std::size_t num_states = 32;
    ArmState home;
    StrikeWindowParams window;
};

/// Kinematic plan execution: one tick of tracking the plan from the current
/// state. The commanded position is clamped to the joint limits and the
/// per-tick motion is rate-limited to velocity_limits * dt, so plans with
/// velocity-inconsistent jumps lag behind instead of teleporting. Ticks
/// beyond the horizon track the plan's final state.
ArmState tracking_controller(const ArmSpec& arm, const Trajectory& plan, const ArmState& current,
                             std::size_t tick);

/// One defend episode: predict the puck, build the strike window, plan once
/// at t = 0, then execute while the puck integrates in lockstep. Contact
/// (distance <= puck_radius + mallet_radius at any tick) counts as a block.
EpisodeResult run_episode(const TableSpec& table, const ArmSpec& arm, const Planner& planner,
                          const PuckState& initial, const EpisodeParams& params,
                          std::uint64_t episode_seed, bool keep_trace = false);

struct LaunchParams {
    double x0 = 1.6;
    double y_halfwidth = 0.45;
    double speed_min = 2.0;
    double speed_max = 3.0;
    double angle_max_rad = 0.7854; // 45 degrees
};

/// Random incoming shot (always moving toward the defend side).
PuckState sample_launch(const TableSpec& table, const LaunchParams& params, Rng& rng);

struct EvalSummary {
    std::size_t episodes = 0;
    std::size_t feasible = 0;
    std::size_t blocked = 0;
    double block_rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_cost = 0.0;
    double median_ms_per_step = 0.0;
    std::vector<EpisodeResult> results; // ordered by episode index
};

/// Fixed seeded episode set (bitwise-identical initial conditions for equal
/// seeds), shared across methods. Block rate = blocked / feasible. threads=1
/// runs serially; more threads partition episodes and merge by index.
EvalSummary run_eval(const TableSpec& table, const ArmSpec& arm, const Planner& planner,
                     std::size_t n_episodes, std::uint64_t seed, const EpisodeParams& params,
                     const LaunchParams& launch, unsigned threads = 1);

/// 95% Wilson score interval for x successes out of n.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n);

} // namespace kcgg
