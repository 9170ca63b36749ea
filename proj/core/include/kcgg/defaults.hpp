#pragma once

#include "kcgg/airhockey.hpp"
#include "kcgg/kinematics.hpp"

namespace kcgg {

/// Default experimental setup: a planar 3-link arm guarding the defend line
/// of a 2 m x 1 m table. The home pose parks the mallet beyond the far side
/// wall with a straight elbow, so a do-nothing policy blocks almost nothing
/// and the two expert styles separate cleanly by elbow sign.

ArmSpec default_arm();
TableSpec default_table();
LaunchParams default_launch();
EpisodeParams default_episode_params();

} // namespace kcgg
