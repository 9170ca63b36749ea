#include "kcgg/json_adapters.hpp"

namespace kcgg {

using nlohmann::json;

void to_json(json& j, const ArmSpec& a) {
    j = json{{"link_lengths", a.link_lengths},
             {"base_position", a.base_position},
             {"joint_limits", a.joint_limits},
             {"velocity_limits", a.velocity_limits}};
}

void from_json(const json& j, ArmSpec& a) {
    j.at("link_lengths").get_to(a.link_lengths);
    j.at("base_position").get_to(a.base_position);
    j.at("joint_limits").get_to(a.joint_limits);
    j.at("velocity_limits").get_to(a.velocity_limits);
}

void to_json(json& j, const TableSpec& t) {
    j = json{{"length", t.length},
             {"width", t.width},
             {"goal_width", t.goal_width},
             {"puck_radius", t.puck_radius},
             {"mallet_radius", t.mallet_radius},
             {"damping", t.damping},
             {"defend_line_x", t.defend_line_x}};
}

void from_json(const json& j, TableSpec& t) {
    j.at("length").get_to(t.length);
    j.at("width").get_to(t.width);
    j.at("goal_width").get_to(t.goal_width);
    j.at("puck_radius").get_to(t.puck_radius);
    j.at("mallet_radius").get_to(t.mallet_radius);
    j.at("damping").get_to(t.damping);
    j.at("defend_line_x").get_to(t.defend_line_x);
}

void to_json(json& j, const LaunchParams& l) {
    j = json{{"x0", l.x0},
             {"y_halfwidth", l.y_halfwidth},
             {"speed_min", l.speed_min},
             {"speed_max", l.speed_max},
             {"angle_max_rad", l.angle_max_rad}};
}

void from_json(const json& j, LaunchParams& l) {
    j.at("x0").get_to(l.x0);
    j.at("y_halfwidth").get_to(l.y_halfwidth);
    j.at("speed_min").get_to(l.speed_min);
    j.at("speed_max").get_to(l.speed_max);
    j.at("angle_max_rad").get_to(l.angle_max_rad);
}

void to_json(json& j, const EpisodeParams& e) {
    j = json{{"dt", e.dt},
             {"num_states", e.num_states},
             {"home_q", e.home.q},
             {"home_qdot", e.home.qdot},
             {"zone_halfwidth", e.window.zone_halfwidth},
             {"reach_margin", e.window.reach_margin}};
}

void from_json(const json& j, EpisodeParams& e) {
    j.at("dt").get_to(e.dt);
    j.at("num_states").get_to(e.num_states);
    j.at("home_q").get_to(e.home.q);
    j.at("home_qdot").get_to(e.home.qdot);
    j.at("zone_halfwidth").get_to(e.window.zone_halfwidth);
    j.at("reach_margin").get_to(e.window.reach_margin);
}

} // namespace kcgg
