#include "kcgg/defaults.hpp"

namespace kcgg {

ArmSpec default_arm() {
    ArmSpec a;
    a.link_lengths = {0.55, 0.44, 0.44};
    a.base_position = {0.0, 0.0};
    a.joint_limits = {{-3.1, 3.1}, {-3.1, 3.1}, {-3.1, 3.1}};
    a.velocity_limits = {14.0, 14.0, 14.0};
    return a;
}

TableSpec default_table() { return TableSpec{}; }

LaunchParams default_launch() { return LaunchParams{}; }

EpisodeParams default_episode_params() {
    EpisodeParams p;
    p.dt = 0.02;
    p.num_states = 32;
    p.home.q = {1.1, 0.0, 0.0};
    p.home.qdot = {0.0, 0.0, 0.0};
    return p;
}

} // namespace kcgg
