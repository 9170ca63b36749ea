#include "kcgg/trajectory.hpp"

#include <cmath>
#include <string>

#include "kcgg/errors.hpp"

namespace kcgg {

void Trajectory::validate() const {
    if (state_dim == 0 || state_dim % 2 != 0) {
        throw ConfigError("Trajectory: state_dim must be a positive even number, got " +
                          std::to_string(state_dim));
    }
    if (states.empty() || states.size() % state_dim != 0) {
        throw ConfigError("Trajectory: states size " + std::to_string(states.size()) +
                          " is not a positive multiple of state_dim " + std::to_string(state_dim));
    }
    if (!(dt > 0.0)) {
        throw ConfigError("Trajectory: dt must be positive");
    }
    for (double v : states) {
        if (!std::isfinite(v)) throw ConfigError("Trajectory: non-finite state entry");
    }
}

} // namespace kcgg
