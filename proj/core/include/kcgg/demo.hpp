#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kcgg/airhockey.hpp"
#include "kcgg/trajectory.hpp"

namespace kcgg {

/// The two stroke styles of the scripted expert. They intercept the same
/// puck with opposite elbow configurations, which is the multimodality the
/// diffusion model has to capture.
enum class StrokeStyle : std::uint16_t { SweepLow = 0, SweepHigh = 1 };

const char* to_string(StrokeStyle s);

struct ExpertParams {
    double approach_angle = 0.5; // end-effector approach offset, mirrored per style
    double min_elbow = 0.15;     // reject intercepts with a near-straight elbow
    std::size_t min_hit_step = 6;
};

/// Minimum-jerk joint-space intercept of the predicted puck at the defend
/// line, approached from below (SweepLow) or above (SweepHigh). Returns
/// nullopt when the intercept is unreachable, violates limits, or leaves the
/// elbow too close to straight for the styles to separate. Requires a 3-dof
/// arm.
std::optional<Trajectory> scripted_expert(const TableSpec& table, const ArmSpec& arm,
                                          const PuckState& initial, StrokeStyle style,
                                          const EpisodeParams& params,
                                          const ExpertParams& expert = {});

/// Style feature used throughout the tests: sign of the elbow joint at the
/// mid-horizon state (positive = SweepHigh).
double elbow_angle_at_mid(const Trajectory& traj);

struct DemoRecord {
    Trajectory trajectory;
    std::uint16_t label = 0;
    PuckState initial_puck;
};

struct DemoSet {
    ArmSpec arm;
    TableSpec table;
    double dt = 0.02;
    std::size_t num_states = 0;
    std::size_t state_dim = 0;
    std::vector<std::string> style_names;
    std::vector<std::size_t> style_counts;
    std::vector<DemoRecord> demos;
};

/// n demos per style over randomized episodes. Every accepted demo has been
/// replayed in the simulator and blocked; rejected intercepts resample the
/// episode. Aborts with a diagnostic when more than half of the attempts get
/// rejected (episode distribution misconfigured).
DemoSet generate_dataset(const TableSpec& table, const ArmSpec& arm, std::size_t n_per_style,
                         std::uint64_t seed, const EpisodeParams& params,
                         const LaunchParams& launch);

/// Dataset file: magic "KCGGDAT1", u64 LE header length, JSON header, then
/// per-demo records (u16 LE label, (H+1) x d f64 LE states, 4 f64 LE puck
/// state). Round-trips bitwise.
void save_dataset(const DemoSet& set, const std::string& path);
DemoSet load_dataset(const std::string& path);

} // namespace kcgg
