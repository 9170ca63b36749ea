#include "kcgg/config.hpp"

#include <fstream>
#include <set>

#include "kcgg/defaults.hpp"
#include "kcgg/errors.hpp"
#include "kcgg/io_util.hpp"
#include "kcgg/json_adapters.hpp"

namespace kcgg {

using nlohmann::json;

namespace {

/// Wrapper enforcing the "unknown keys rejected" contract: every key must be
/// consumed through this object before finish().
class StrictObject {
public:
    StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <typename T>
    void get(const std::string& key, T& out) {
        if (!j_.contains(key)) return;
        consume(key);
        try {
            j_.at(key).get_to(out);
        } catch (const json::exception& e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    template <typename T>
    void require(const std::string& key, T& out) {
        if (!j_.contains(key)) throw ConfigError(path_ + ": missing required key '" + key + "'");
        get(key, out);
    }

    const json* child(const std::string& key) {
        if (!j_.contains(key)) return nullptr;
        consume(key);
        return &j_.at(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (seen_.find(it.key()) == seen_.end()) {
                throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
            }
        }
    }

private:
    void consume(const std::string& key) { seen_.insert(key); }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

SamplerSpec sampler_from_json(const json& j, const std::string& path) {
    StrictObject o(j, path);
    SamplerSpec s;
    o.require("name", s.name);
    std::string method;
    o.require("method", method);
    s.method = method_from_string(method);
    o.get("batch_size", s.batch_size);
    o.get("eta", s.eta);
    if (o.has("kcgg_scale")) {
        std::string scale;
        o.get("kcgg_scale", scale);
        if (scale == "one_minus_alpha_bar") s.kcgg_scale = KcggScale::OneMinusAlphaBar;
        else if (scale == "sqrt_one_minus_alpha_bar") s.kcgg_scale = KcggScale::SqrtOneMinusAlphaBar;
        else if (scale == "constant") s.kcgg_scale = KcggScale::Constant;
        else throw ConfigError(path + ".kcgg_scale: unknown value '" + scale + "'");
    }
    o.get("batch_filter", s.batch_filter);
    o.get("T", s.T);
    o.get("condition", s.condition);
    o.finish();
    return s;
}

const char* to_string(KcggScale s) {
    switch (s) {
        case KcggScale::OneMinusAlphaBar: return "one_minus_alpha_bar";
        case KcggScale::SqrtOneMinusAlphaBar: return "sqrt_one_minus_alpha_bar";
        case KcggScale::Constant: return "constant";
    }
    return "?";
}

json sampler_to_json(const SamplerSpec& s) {
    return json{{"name", s.name},     {"method", to_string(s.method)},
                {"batch_size", s.batch_size}, {"eta", s.eta},
                {"kcgg_scale", to_string(s.kcgg_scale)},
                {"batch_filter", s.batch_filter}, {"T", s.T},
                {"condition", s.condition}};
}

std::vector<SamplerSpec> samplers_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array");
    std::vector<SamplerSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(sampler_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

} // namespace

std::vector<SamplerSpec> default_sampler_suite() {
    SamplerSpec unc_nofilter{"unconstrained_nofilter", Method::Unconstrained, 16, 0.0,
                             KcggScale::OneMinusAlphaBar, false, 0, ""};
    SamplerSpec unc{"unconstrained", Method::Unconstrained, 16, 0.0,
                    KcggScale::OneMinusAlphaBar, true, 0, ""};
    SamplerSpec proj{"projection", Method::Projection, 16, 0.1,
                     KcggScale::OneMinusAlphaBar, true, 0, ""};
    SamplerSpec kcgg{"kcgg", Method::Kcgg, 16, 2.0, KcggScale::SqrtOneMinusAlphaBar, true, 0, ""};
    return {unc_nofilter, unc, proj, kcgg};
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig c;
    c.arm = default_arm();
    c.table = default_table();
    c.episode = default_episode_params();
    c.launch = default_launch();
    c.dataset_path = "out/demos.kcggdat";
    c.model_path = "out/model.kcggnet";
    c.evaluate.samplers = default_sampler_suite();
    c.sweep.samplers = default_sampler_suite();
    return c;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c = defaults();
    StrictObject o(j, "config");

    int version = 0;
    o.require("schema_version", version);
    if (version != 1) {
        throw ConfigError("config: unsupported schema_version " + std::to_string(version));
    }
    c.schema_version = version;
    o.require("seed", c.seed);
    o.get("out_dir", c.out_dir);
    o.get("dataset_path", c.dataset_path);
    o.get("model_path", c.model_path);
    o.get("parallel", c.parallel);

    if (const json* arm = o.child("arm")) {
        StrictObject ao(*arm, "config.arm");
        ArmSpec spec;
        ao.require("link_lengths", spec.link_lengths);
        ao.require("base_position", spec.base_position);
        ao.require("joint_limits", spec.joint_limits);
        ao.require("velocity_limits", spec.velocity_limits);
        ao.finish();
        c.arm = spec;
    }
    if (const json* table = o.child("table")) {
        StrictObject to(*table, "config.table");
        to.get("length", c.table.length);
        to.get("width", c.table.width);
        to.get("goal_width", c.table.goal_width);
        to.get("puck_radius", c.table.puck_radius);
        to.get("mallet_radius", c.table.mallet_radius);
        to.get("damping", c.table.damping);
        to.get("defend_line_x", c.table.defend_line_x);
        to.finish();
    }
    if (const json* ep = o.child("episode")) {
        StrictObject eo(*ep, "config.episode");
        eo.get("dt", c.episode.dt);
        eo.get("num_states", c.episode.num_states);
        eo.get("home_q", c.episode.home.q);
        eo.get("home_qdot", c.episode.home.qdot);
        eo.get("zone_halfwidth", c.episode.window.zone_halfwidth);
        eo.get("reach_margin", c.episode.window.reach_margin);
        eo.finish();
    }
    if (const json* lp = o.child("launch")) {
        StrictObject lo(*lp, "config.launch");
        lo.get("x0", c.launch.x0);
        lo.get("y_halfwidth", c.launch.y_halfwidth);
        lo.get("speed_min", c.launch.speed_min);
        lo.get("speed_max", c.launch.speed_max);
        lo.get("angle_max_rad", c.launch.angle_max_rad);
        lo.finish();
    }
    if (const json* gen = o.child("generate")) {
        StrictObject go(*gen, "config.generate");
        go.get("demos_per_style", c.generate.demos_per_style);
        go.finish();
    }
    if (const json* tr = o.child("train")) {
        StrictObject to(*tr, "config.train");
        to.get("epochs", c.train.epochs);
        to.get("batch_size", c.train.batch_size);
        to.get("learning_rate", c.train.learning_rate);
        to.get("cond_dropout", c.train.cond_dropout);
        to.get("T", c.train.schedule_T);
        to.get("width", c.train.width);
        to.get("num_blocks", c.train.num_blocks);
        to.get("time_embed_dim", c.train.time_embed_dim);
        to.get("cond_embed_dim", c.train.cond_embed_dim);
        to.finish();
    }
    if (const json* ev = o.child("evaluate")) {
        StrictObject eo(*ev, "config.evaluate");
        eo.get("episodes", c.evaluate.episodes);
        eo.get("budget_ms", c.evaluate.budget_ms);
        eo.get("trace_episodes", c.evaluate.trace_episodes);
        if (const json* s = eo.child("samplers")) {
            c.evaluate.samplers = samplers_from_json(*s, "config.evaluate.samplers");
        }
        eo.finish();
    }
    if (const json* sw = o.child("sweep")) {
        StrictObject so(*sw, "config.sweep");
        so.get("episodes", c.sweep.episodes);
        so.get("budgets_ms", c.sweep.budgets_ms);
        if (const json* s = so.child("samplers")) {
            c.sweep.samplers = samplers_from_json(*s, "config.sweep.samplers");
        }
        so.finish();
    }
    o.finish();
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::string text = io::read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json samplers_eval = json::array();
    for (const auto& s : evaluate.samplers) samplers_eval.push_back(sampler_to_json(s));
    json samplers_sweep = json::array();
    for (const auto& s : sweep.samplers) samplers_sweep.push_back(sampler_to_json(s));
    return json{
        {"schema_version", schema_version},
        {"seed", seed},
        {"out_dir", out_dir},
        {"dataset_path", dataset_path},
        {"model_path", model_path},
        {"parallel", parallel},
        {"arm", arm},
        {"table", table},
        {"episode", episode},
        {"launch", launch},
        {"generate", json{{"demos_per_style", generate.demos_per_style}}},
        {"train",
         json{{"epochs", train.epochs},
              {"batch_size", train.batch_size},
              {"learning_rate", train.learning_rate},
              {"cond_dropout", train.cond_dropout},
              {"T", train.schedule_T},
              {"width", train.width},
              {"num_blocks", train.num_blocks},
              {"time_embed_dim", train.time_embed_dim},
              {"cond_embed_dim", train.cond_embed_dim}}},
        {"evaluate",
         json{{"episodes", evaluate.episodes},
              {"budget_ms", evaluate.budget_ms},
              {"trace_episodes", evaluate.trace_episodes},
              {"samplers", samplers_eval}}},
        {"sweep",
         json{{"episodes", sweep.episodes},
              {"budgets_ms", sweep.budgets_ms},
              {"samplers", samplers_sweep}}},
    };
}

void ExperimentConfig::validate() const {
    arm.validate();
    table.validate();
    if (dataset_path.empty()) throw ConfigError("config: dataset_path must not be empty");
    if (model_path.empty()) throw ConfigError("config: model_path must not be empty");
    if (episode.num_states < 2) throw ConfigError("config: episode.num_states must be >= 2");
    if (!(episode.dt > 0.0)) throw ConfigError("config: episode.dt must be positive");
    if (train.schedule_T < 2) throw ConfigError("config: train.T must be >= 2");
    if (parallel < 1) throw ConfigError("config: parallel must be >= 1");
    for (const auto& list : {evaluate.samplers, sweep.samplers}) {
        for (const auto& s : list) {
            if (s.name.empty()) throw ConfigError("config: sampler name must not be empty");
            if (s.batch_size < 1) throw ConfigError("config: sampler batch_size must be >= 1");
            if (s.T == 1) throw ConfigError("config: sampler T must be 0 (budget) or >= 2");
            if (!(s.eta >= 0.0)) throw ConfigError("config: sampler eta must be >= 0");
        }
    }
    for (double b : sweep.budgets_ms) {
        if (!(b > 0.0)) throw ConfigError("config: sweep budgets must be positive");
    }
}

} // namespace kcgg
