#include "kcgg/airhockey.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "kcgg/errors.hpp"

namespace kcgg {

void TableSpec::validate() const {
    if (!(length > 0.0 && width > 0.0)) throw ConfigError("TableSpec: table sides must be positive");
    if (!(goal_width > 0.0 && goal_width < width)) {
        throw ConfigError("TableSpec: goal_width must lie in (0, width)");
    }
    if (!(puck_radius > 0.0 && mallet_radius > 0.0)) {
        throw ConfigError("TableSpec: radii must be positive");
    }
    if (!(damping >= 0.0 && damping <= 1.0)) {
        throw ConfigError("TableSpec: damping must lie in [0, 1]");
    }
    if (!(defend_line_x > 0.0 && defend_line_x < length)) {
        throw ConfigError("TableSpec: defend_line_x must lie inside the table");
    }
}

PuckState step_puck(const TableSpec& table, const PuckState& state, double dt) {
    if (!(dt > 0.0)) throw ContractError("step_puck: dt must be positive");
    PuckState out = state;
    double decay = std::pow(table.damping, dt);
    out.velocity[0] *= decay;
    out.velocity[1] *= decay;
    out.position[0] += out.velocity[0] * dt;
    out.position[1] += out.velocity[1] * dt;

    // Specular reflection off the side walls: mirror the overshoot, flip vy.
    const double y_max = table.width / 2.0 - table.puck_radius;
    if (out.position[1] > y_max) {
        out.position[1] = 2.0 * y_max - out.position[1];
        out.velocity[1] = -out.velocity[1];
    } else if (out.position[1] < -y_max) {
        out.position[1] = -2.0 * y_max - out.position[1];
        out.velocity[1] = -out.velocity[1];
    }
    return out;
}

std::vector<Vec2> predict_puck(const TableSpec& table, const PuckState& state, std::size_t steps,
                               double dt) {
    std::vector<Vec2> out;
    out.reserve(steps);
    PuckState cur = state;
    for (std::size_t t = 0; t < steps; ++t) {
        out.push_back(cur.position);
        cur = step_puck(table, cur, dt);
    }
    return out;
}

std::optional<StrikeConstraint> make_strike_window(const TableSpec& table, const ArmSpec& arm,
                                                   const std::vector<Vec2>& prediction,
                                                   const StrikeWindowParams& params) {
    const double reach = arm.reach() - params.reach_margin;
    std::size_t first = prediction.size();
    std::size_t last = 0;
    for (std::size_t t = 1; t < prediction.size(); ++t) {
        const Vec2& b = prediction[t];
        if (std::abs(b[0] - table.defend_line_x) > params.zone_halfwidth) continue;
        double dx = b[0] - arm.base_position[0];
        double dy = b[1] - arm.base_position[1];
        if (std::hypot(dx, dy) > reach) continue;
        if (std::abs(b[1]) > table.width / 2.0) continue;
        first = std::min(first, t);
        last = std::max(last, t);
    }
    if (first > last || first == prediction.size()) return std::nullopt;

    StrikeConstraint c;
    c.t_start = first;
    c.t_end = last;
    for (std::size_t t = first; t <= last; ++t) c.targets[t] = prediction[t];
    return c;
}

ArmState tracking_controller(const ArmSpec& arm, const Trajectory& plan, const ArmState& current,
                             std::size_t tick) {
    const std::size_t n = arm.dof();
    if (plan.state_dim != 2 * n) {
        throw ShapeError("tracking_controller: plan state_dim " + std::to_string(plan.state_dim) +
                         " does not match arm state dim " + std::to_string(2 * n));
    }
    if (current.q.size() != n) {
        throw ShapeError("tracking_controller: current state has wrong dof");
    }
    std::size_t t = std::min(tick, plan.num_states() - 1);
    ArmState target;
    auto q = plan.q(t);
    auto qd = plan.qdot(t);
    target.q.assign(q.begin(), q.end());
    target.qdot.assign(qd.begin(), qd.end());
    target = clamp_to_limits(arm, target);

    ArmState next = target;
    for (std::size_t j = 0; j < n; ++j) {
        double max_step = arm.velocity_limits[j] * plan.dt;
        double dq = target.q[j] - current.q[j];
        if (dq > max_step) dq = max_step;
        if (dq < -max_step) dq = -max_step;
        next.q[j] = current.q[j] + dq;
        next.qdot[j] = dq / plan.dt;
    }
    return clamp_to_limits(arm, next);
}

EpisodeResult run_episode(const TableSpec& table, const ArmSpec& arm, const Planner& planner,
                          const PuckState& initial, const EpisodeParams& params,
                          std::uint64_t episode_seed, bool keep_trace) {
    table.validate();
    arm.validate();
    if (!(initial.velocity[0] < 0.0)) {
        throw ContractError("run_episode: initial puck must move toward the defend side (vx < 0)");
    }

    EpisodeResult result;
    std::vector<Vec2> prediction = predict_puck(table, initial, params.num_states, params.dt);
    std::optional<StrikeConstraint> window =
        make_strike_window(table, arm, prediction, params.window);
    result.feasible = window.has_value();

    PlanResult plan = planner.plan(initial, window, episode_seed);
    plan.trajectory.validate();
    result.plan_latency_ms = plan.latency_ms;
    result.diag = plan.diag;
    if (window) {
        result.plan_cost = strike_cost_value(*window, arm, plan.trajectory);
    }

    const double contact_radius = table.puck_radius + table.mallet_radius;
    PuckState puck = initial;
    ArmState state = clamp_to_limits(arm, params.home);
    for (std::size_t tick = 0; tick < params.num_states; ++tick) {
        double now = static_cast<double>(tick) * params.dt;
        std::size_t pt = std::min(tick, plan.trajectory.num_states() - 1);
        auto plan_q = plan.trajectory.q(pt);
        auto plan_qd = plan.trajectory.qdot(pt);
        state = tracking_controller(arm, plan.trajectory, state, tick);
        bool clamped = !std::equal(state.q.begin(), state.q.end(), plan_q.begin(), plan_q.end()) ||
                       !std::equal(state.qdot.begin(), state.qdot.end(), plan_qd.begin(),
                                   plan_qd.end());

        Vec2 ee = forward_kinematics(arm, state.q);
        double dist = std::hypot(ee[0] - puck.position[0], ee[1] - puck.position[1]);
        result.min_distance = std::min(result.min_distance, dist);
        if (!result.blocked && dist <= contact_radius) {
            result.blocked = true;
            result.contact_time = now;
        }
        if (keep_trace) {
            result.trace.push_back(TickRecord{now, puck, state, ee, dist, clamped});
        }
        if (puck.position[0] < 0.0 || puck.position[0] > table.length) break;
        puck = step_puck(table, puck, params.dt);
    }
    return result;
}

PuckState sample_launch(const TableSpec& table, const LaunchParams& params, Rng& rng) {
    double y_max = std::min(params.y_halfwidth, table.width / 2.0 - table.puck_radius);
    PuckState s;
    s.position = {params.x0, rng.uniform(-y_max, y_max)};
    double speed = rng.uniform(params.speed_min, params.speed_max);
    double heading = rng.uniform(-params.angle_max_rad, params.angle_max_rad);
    s.velocity = {-speed * std::cos(heading), speed * std::sin(heading)};
    return s;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n) {
    if (n == 0) return {0.0, 0.0};
    const double z = 1.959963984540054; // 95%
    double p = static_cast<double>(successes) / static_cast<double>(n);
    double nn = static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EvalSummary run_eval(const TableSpec& table, const ArmSpec& arm, const Planner& planner,
                     std::size_t n_episodes, std::uint64_t seed, const EpisodeParams& params,
                     const LaunchParams& launch, unsigned threads) {
    if (n_episodes < 1) throw ContractError("run_eval: need at least one episode");

    EvalSummary summary;
    summary.episodes = n_episodes;
    summary.results.resize(n_episodes);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            Rng episode_rng(seed, Rng::mix(0x657069ULL, e));
            PuckState initial = sample_launch(table, launch, episode_rng);
            std::uint64_t episode_seed = Rng::mix(seed, e);
            summary.results[e] = run_episode(table, arm, planner, initial, params, episode_seed);
        }
    };

    if (threads <= 1 || n_episodes < 2) {
        run_range(0, n_episodes);
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(n_episodes));
        std::vector<std::thread> pool;
        std::size_t chunk = (n_episodes + nt - 1) / nt;
        for (unsigned t = 0; t < nt; ++t) {
            std::size_t begin = t * chunk;
            std::size_t end = std::min(n_episodes, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    double cost_sum = 0.0;
    std::size_t cost_count = 0;
    std::vector<double> step_times;
    for (const EpisodeResult& r : summary.results) {
        if (!r.feasible) continue;
        ++summary.feasible;
        if (r.blocked) ++summary.blocked;
        if (std::isfinite(r.plan_cost)) {
            cost_sum += r.plan_cost;
            ++cost_count;
        }
        if (r.diag && r.diag->ms_per_step > 0.0) step_times.push_back(r.diag->ms_per_step);
    }
    summary.block_rate = summary.feasible
                             ? static_cast<double>(summary.blocked) / static_cast<double>(summary.feasible)
                             : 0.0;
    auto [lo, hi] = wilson_interval(summary.blocked, summary.feasible);
    summary.ci_lo = lo;
    summary.ci_hi = hi;
    summary.mean_cost = cost_count ? cost_sum / static_cast<double>(cost_count) : 0.0;
    if (!step_times.empty()) {
        std::sort(step_times.begin(), step_times.end());
        summary.median_ms_per_step = step_times[step_times.size() / 2];
    }
    return summary;
}

} // namespace kcgg
