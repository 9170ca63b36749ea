#include "kcgg/demo.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "kcgg/errors.hpp"
#include "kcgg/io_util.hpp"
#include "kcgg/json_adapters.hpp"
#include "kcgg/logging.hpp"

namespace kcgg {

const char* to_string(StrokeStyle s) {
    return s == StrokeStyle::SweepLow ? "sweep_low" : "sweep_high";
}

namespace {

double minjerk_pos(double u) { return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u); }
double minjerk_vel(double u) { return u * u * (30.0 - 60.0 * u + 30.0 * u * u); }

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

bool within_limits(const ArmSpec& arm, const std::vector<double>& q) {
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < arm.joint_limits[i][0] || q[i] > arm.joint_limits[i][1]) return false;
    }
    return true;
}

/// 3R planar IK: place the last link along a style-offset approach direction
/// and solve the remaining 2R chain for the wrist, elbow sign by style.
std::optional<std::vector<double>> intercept_ik(const ArmSpec& arm, const Vec2& target,
                                                StrokeStyle style, const ExpertParams& expert) {
    const double l1 = arm.link_lengths[0];
    const double l2 = arm.link_lengths[1];
    const double l3 = arm.link_lengths[2];
    const double px = target[0] - arm.base_position[0];
    const double py = target[1] - arm.base_position[1];
    const double sign = style == StrokeStyle::SweepHigh ? 1.0 : -1.0;

    double phi = std::atan2(py, px) + sign * expert.approach_angle;
    double wx = px - l3 * std::cos(phi);
    double wy = py - l3 * std::sin(phi);
    double r2 = wx * wx + wy * wy;
    double c2 = (r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    if (std::abs(c2) > 1.0 - 1e-9) return std::nullopt;

    double q2 = sign * std::acos(c2);
    if (std::abs(q2) < expert.min_elbow) return std::nullopt;
    double q1 = std::atan2(wy, wx) - std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
    double q3 = wrap_angle(phi - q1 - q2);
    q1 = wrap_angle(q1);

    std::vector<double> q{q1, q2, q3};
    if (!within_limits(arm, q)) return std::nullopt;
    return q;
}

} // namespace

double elbow_angle_at_mid(const Trajectory& traj) {
    std::size_t mid = traj.num_states() / 2;
    return traj.q(mid)[1];
}

std::optional<Trajectory> scripted_expert(const TableSpec& table, const ArmSpec& arm,
                                          const PuckState& initial, StrokeStyle style,
                                          const EpisodeParams& params,
                                          const ExpertParams& expert) {
    if (arm.dof() != 3) {
        throw ConfigError("scripted_expert: the expert supports the planar 3-link arm only");
    }
    if (params.home.q.size() != 3 || params.home.qdot.size() != 3) {
        throw ConfigError("scripted_expert: home state must have 3 joints");
    }

    std::vector<Vec2> prediction = predict_puck(table, initial, params.num_states, params.dt);
    std::size_t hit = prediction.size();
    for (std::size_t t = expert.min_hit_step; t < prediction.size(); ++t) {
        if (prediction[t][0] <= table.defend_line_x) {
            hit = t;
            break;
        }
    }
    if (hit == 0 || hit >= prediction.size()) return std::nullopt;

    auto q_hit = intercept_ik(arm, prediction[hit], style, expert);
    if (!q_hit) return std::nullopt;

    const std::size_t n = arm.dof();
    const double hit_time = static_cast<double>(hit) * params.dt;
    Trajectory traj;
    traj.state_dim = 2 * n;
    traj.dt = params.dt;
    traj.states.assign(params.num_states * traj.state_dim, 0.0);

    for (std::size_t t = 0; t < params.num_states; ++t) {
        auto row = traj.state(t);
        if (t <= hit) {
            double u = static_cast<double>(t) / static_cast<double>(hit);
            double s = minjerk_pos(u);
            double v = minjerk_vel(u) / hit_time;
            for (std::size_t j = 0; j < n; ++j) {
                double dq = (*q_hit)[j] - params.home.q[j];
                row[j] = params.home.q[j] + dq * s;
                row[n + j] = dq * v;
            }
        } else {
            // Hold the intercept pose; the mallet waits on the puck's path.
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = (*q_hit)[j];
                row[n + j] = 0.0;
            }
        }
    }

    // Construction keeps q/qdot self-consistent, so out-of-limit profiles are
    // rejected rather than clamped.
    for (std::size_t t = 0; t < params.num_states; ++t) {
        auto q = traj.q(t);
        auto qd = traj.qdot(t);
        for (std::size_t j = 0; j < n; ++j) {
            if (q[j] < arm.joint_limits[j][0] || q[j] > arm.joint_limits[j][1]) return std::nullopt;
            if (std::abs(qd[j]) > arm.velocity_limits[j]) return std::nullopt;
        }
    }
    return traj;
}

DemoSet generate_dataset(const TableSpec& table, const ArmSpec& arm, std::size_t n_per_style,
                         std::uint64_t seed, const EpisodeParams& params,
                         const LaunchParams& launch) {
    if (n_per_style < 1) throw ConfigError("generate_dataset: n_per_style must be >= 1");
    table.validate();
    arm.validate();

    DemoSet set;
    set.arm = arm;
    set.table = table;
    set.dt = params.dt;
    set.num_states = params.num_states;
    set.state_dim = 2 * arm.dof();
    set.style_names = {to_string(StrokeStyle::SweepLow), to_string(StrokeStyle::SweepHigh)};
    set.style_counts = {0, 0};

    const std::size_t max_attempts_per_style = 50 * n_per_style + 100;
    std::size_t attempts_total = 0;
    std::size_t accepted_total = 0;

    for (std::uint16_t style_idx = 0; style_idx < 2; ++style_idx) {
        auto style = static_cast<StrokeStyle>(style_idx);
        std::size_t accepted = 0;
        for (std::size_t attempt = 0; attempt < max_attempts_per_style && accepted < n_per_style;
             ++attempt) {
            ++attempts_total;
            Rng rng(seed, Rng::mix(0x64656d6fULL + style_idx, attempt));
            PuckState puck = sample_launch(table, launch, rng);
            auto traj = scripted_expert(table, arm, puck, style, params);
            if (!traj) continue;

            FixedPlanPlanner replay(*traj);
            EpisodeResult res = run_episode(table, arm, replay, puck, params, 0);
            if (!res.blocked) continue;

            set.demos.push_back(DemoRecord{std::move(*traj), style_idx, puck});
            ++accepted;
            ++accepted_total;

            if (attempts_total >= 20 && 2 * accepted_total < attempts_total) {
                throw Error("generate_dataset: rejection rate above 50% (" +
                            std::to_string(attempts_total - accepted_total) + "/" +
                            std::to_string(attempts_total) +
                            " rejected); episode distribution misconfigured");
            }
        }
        if (accepted < n_per_style) {
            throw Error("generate_dataset: could not build " + std::to_string(n_per_style) +
                        " '" + std::string(to_string(style)) + "' demos (got " +
                        std::to_string(accepted) + ")");
        }
        set.style_counts[style_idx] = accepted;
    }
    log_info("generate_dataset: " + std::to_string(set.demos.size()) + " demos, " +
             std::to_string(attempts_total - accepted_total) + " rejected attempts");
    return set;
}

namespace {
constexpr char kDatasetMagic[8] = {'K', 'C', 'G', 'G', 'D', 'A', 'T', '1'};
} // namespace

void save_dataset(const DemoSet& set, const std::string& path) {
    nlohmann::json header;
    header["arm"] = set.arm;
    header["table"] = set.table;
    header["dt"] = set.dt;
    header["num_states"] = set.num_states;
    header["state_dim"] = set.state_dim;
    header["style_names"] = set.style_names;
    header["style_counts"] = set.style_counts;
    header["demo_count"] = set.demos.size();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_dataset: cannot open '" + path + "' for writing");
    out.write(kDatasetMagic, sizeof(kDatasetMagic));
    io::write_json_block(out, header);
    for (const DemoRecord& demo : set.demos) {
        io::write_u16(out, demo.label);
        io::write_f64_array(out, demo.trajectory.states.data(), demo.trajectory.states.size());
        double puck[4] = {demo.initial_puck.position[0], demo.initial_puck.position[1],
                          demo.initial_puck.velocity[0], demo.initial_puck.velocity[1]};
        io::write_f64_array(out, puck, 4);
    }
    if (!out) throw IoError("save_dataset: write failed for '" + path + "'");
}

DemoSet load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_dataset: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kDatasetMagic, sizeof(kDatasetMagic)) != 0) {
        throw IoError("load_dataset: '" + path + "' is not a KCGGDAT1 dataset");
    }
    nlohmann::json header = io::read_json_block(in);

    DemoSet set;
    header.at("arm").get_to(set.arm);
    header.at("table").get_to(set.table);
    header.at("dt").get_to(set.dt);
    header.at("num_states").get_to(set.num_states);
    header.at("state_dim").get_to(set.state_dim);
    header.at("style_names").get_to(set.style_names);
    header.at("style_counts").get_to(set.style_counts);
    auto count = header.at("demo_count").get<std::size_t>();

    set.demos.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        DemoRecord demo;
        demo.label = io::read_u16(in);
        demo.trajectory.state_dim = set.state_dim;
        demo.trajectory.dt = set.dt;
        demo.trajectory.states.resize(set.num_states * set.state_dim);
        io::read_f64_array(in, demo.trajectory.states.data(), demo.trajectory.states.size());
        double puck[4];
        io::read_f64_array(in, puck, 4);
        demo.initial_puck = PuckState{{puck[0], puck[1]}, {puck[2], puck[3]}};
        set.demos.push_back(std::move(demo));
    }
    return set;
}

} // namespace kcgg
