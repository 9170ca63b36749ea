#include "kcgg/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kcgg/demo.hpp"
#include "kcgg/errors.hpp"
#include "kcgg/io_util.hpp"
#include "kcgg/logging.hpp"
#include "kcgg/planners.hpp"
#include "kcgg/training.hpp"

namespace kcgg {

namespace fs = std::filesystem;

namespace {

void ensure_parent_dir(const std::string& path) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::string out_path(const ExperimentConfig& config, const std::string& name) {
    fs::create_directories(config.out_dir);
    return (fs::path(config.out_dir) / name).string();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t spec_seed(const ExperimentConfig& config, const SamplerSpec& spec) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : spec.name) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    return Rng::mix(config.seed, h);
}

SamplerConfig to_sampler_config(const SamplerSpec& spec, std::size_t T,
                                const ExperimentConfig& config) {
    SamplerConfig cfg;
    cfg.method = spec.method;
    cfg.T = T;
    cfg.batch_size = spec.batch_size;
    cfg.eta = spec.eta;
    cfg.kcgg_scale = spec.kcgg_scale;
    cfg.batch_filter = spec.batch_filter;
    cfg.seed = spec_seed(config, spec);
    return cfg;
}

/// First seeded launch whose prediction yields a strike window.
std::pair<PuckState, StrikeConstraint> probe_episode(const ExperimentConfig& config) {
    for (std::size_t attempt = 0; attempt < 64; ++attempt) {
        Rng rng(config.seed, Rng::mix(0x70726f6265ULL, attempt));
        PuckState puck = sample_launch(config.table, config.launch, rng);
        auto pred = predict_puck(config.table, puck, config.episode.num_states, config.episode.dt);
        auto window = make_strike_window(config.table, config.arm, pred, config.episode.window);
        if (window) return {puck, *window};
    }
    throw Error("probe_episode: no feasible probe episode found; launch distribution "
                "never crosses the defend zone");
}

std::size_t resolve_steps(const ExperimentConfig& config, const ModelBundle& bundle,
                          const SamplerSpec& spec, double budget_ms) {
    if (spec.T != 0) return spec.T;
    double ms = measure_ms_per_step(config, bundle, spec);
    std::size_t steps = std::min(time_budget_steps(budget_ms, ms), bundle.schedule.T);
    log_info("sampler '" + spec.name + "': " + fmt17(ms) + " ms/step -> T = " +
             std::to_string(steps) + " for " + fmt17(budget_ms) + " ms budget");
    return steps;
}

MetricsReport to_report(const std::string& name, const EvalSummary& summary,
                        const SamplerConfig& cfg, double budget_ms) {
    MetricsReport r;
    r.method = name;
    r.block_rate = summary.block_rate;
    r.ci_lo = summary.ci_lo;
    r.ci_hi = summary.ci_hi;
    r.mean_cost = summary.mean_cost;
    r.episodes = summary.episodes;
    r.feasible = summary.feasible;
    r.blocked = summary.blocked;
    r.T = cfg.T;
    r.B = cfg.batch_size;
    r.eta = cfg.eta;
    r.ms_per_step = summary.median_ms_per_step;
    r.budget_ms = budget_ms;
    return r;
}

nlohmann::json tick_to_json(const TickRecord& t) {
    return nlohmann::json{{"time", t.time},
                          {"puck_pos", t.puck.position},
                          {"puck_vel", t.puck.velocity},
                          {"q", t.arm.q},
                          {"qdot", t.arm.qdot},
                          {"ee", t.ee},
                          {"distance", t.distance},
                          {"clamped", t.clamped}};
}

} // namespace

ModelBundle load_bundle_checked(const ExperimentConfig& config) {
    ModelBundle bundle = load_model(config.model_path);
    if (bundle.state_dim != 2 * config.arm.dof()) {
        throw ConfigError("model '" + config.model_path + "' was trained for state dim " +
                          std::to_string(bundle.state_dim) + " but the configured arm has " +
                          std::to_string(2 * config.arm.dof()));
    }
    if (bundle.num_states != config.episode.num_states) {
        throw ConfigError("model horizon " + std::to_string(bundle.num_states) +
                          " does not match configured episode horizon " +
                          std::to_string(config.episode.num_states));
    }
    return bundle;
}

double measure_ms_per_step(const ExperimentConfig& config, const ModelBundle& bundle,
                           const SamplerSpec& spec) {
    auto [puck, window] = probe_episode(config);
    StrikeGuidance guidance(window, config.arm, bundle.normalizer, bundle.num_states);
    const GuidanceCost* cost = &guidance;

    std::size_t probe_T = std::min<std::size_t>(8, bundle.schedule.T);
    SamplerConfig cfg = to_sampler_config(spec, probe_T, config);
    int label = bundle.label_id(spec.condition);

    // Warm-up excluded from the measurement.
    sample_batch(bundle.net, bundle.schedule, cfg, label, cost, &bundle.normalizer);
    std::vector<double> times;
    for (int rep = 0; rep < 3; ++rep) {
        auto res = sample_batch(bundle.net, bundle.schedule, cfg, label, cost, &bundle.normalizer);
        times.push_back(res.diag.ms_per_step);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

std::string cmd_generate_data(const ExperimentConfig& config) {
    DemoSet set = generate_dataset(config.table, config.arm, config.generate.demos_per_style,
                                   config.seed, config.episode, config.launch);
    ensure_parent_dir(config.dataset_path);
    save_dataset(set, config.dataset_path);
    log_info("wrote " + std::to_string(set.demos.size()) + " demos to " + config.dataset_path);
    return config.dataset_path;
}

TrainOutput cmd_train(const ExperimentConfig& config) {
    DemoSet set = load_dataset(config.dataset_path);
    if (set.demos.empty()) throw Error("cmd_train: dataset is empty");

    std::vector<Trajectory> dataset;
    std::vector<int> labels;
    dataset.reserve(set.demos.size());
    for (const DemoRecord& d : set.demos) {
        dataset.push_back(d.trajectory);
        labels.push_back(static_cast<int>(d.label));
    }

    Normalizer normalizer = Normalizer::fit(dataset);
    NoiseSchedule schedule = NoiseSchedule::cosine(config.train.schedule_T);

    NetworkArch arch;
    arch.input_dim = set.num_states * set.state_dim;
    arch.width = config.train.width;
    arch.num_blocks = config.train.num_blocks;
    arch.time_embed_dim = config.train.time_embed_dim;
    arch.cond_embed_dim = config.train.cond_embed_dim;
    arch.cond_vocab = set.style_names.size();
    ScoreNetwork net(arch, config.seed);

    TrainOptions options;
    options.epochs = config.train.epochs;
    options.batch_size = config.train.batch_size;
    options.learning_rate = config.train.learning_rate;

    options.cond_dropout = config.train.cond_dropout;
    options.seed = config.seed;

    log_info("training on " + std::to_string(dataset.size()) + " demos for " +
             std::to_string(options.epochs) + " epochs");
    std::vector<double> curve = train(net, dataset, labels, schedule, normalizer, options);

    ModelBundle bundle{std::move(net), std::move(normalizer), std::move(schedule),
                       set.style_names, set.num_states, set.state_dim, set.dt};
    ensure_parent_dir(config.model_path);
    save_model(bundle, config.model_path);

    TrainOutput out;
    out.model_path = config.model_path;
    out.loss_csv_path = out_path(config, "loss.csv");
    out.loss_curve = curve;
    std::string csv = "epoch,loss\n";
    for (std::size_t e = 0; e < curve.size(); ++e) {
        csv += std::to_string(e) + "," + fmt17(curve[e]) + "\n";
    }
    io::write_text_file(out.loss_csv_path, csv);
    log_info("final training loss " + fmt17(curve.empty() ? 0.0 : curve.back()));
    return out;
}

EvaluateOutput cmd_evaluate(const ExperimentConfig& config) {
    ModelBundle bundle = load_bundle_checked(config);
    if (config.evaluate.samplers.empty()) {
        throw ConfigError("cmd_evaluate: no samplers configured");
    }

    EvaluateOutput out;
    std::ostringstream diagnostics;
    for (const SamplerSpec& spec : config.evaluate.samplers) {
        std::size_t T = resolve_steps(config, bundle, spec, config.evaluate.budget_ms);
        SamplerConfig cfg = to_sampler_config(spec, T, config);
        int label = bundle.label_id(spec.condition);
        DiffusionPlanner planner(bundle, config.arm, cfg, label);

        // Warm-up sample, excluded from all timing.
        {
            auto [puck, window] = probe_episode(config);
            planner.plan(puck, window, 0);
        }

        EvalSummary summary = run_eval(config.table, config.arm, planner,
                                       config.evaluate.episodes, config.seed, config.episode,
                                       config.launch, config.parallel);
        out.reports.push_back(to_report(spec.name, summary, cfg, config.evaluate.budget_ms));
        log_info("evaluate '" + spec.name + "': block rate " + fmt17(summary.block_rate) + " (" +
                 std::to_string(summary.blocked) + "/" + std::to_string(summary.feasible) + ")");

        for (std::size_t e = 0; e < summary.results.size(); ++e) {
            const EpisodeResult& r = summary.results[e];
            nlohmann::json line{{"method", spec.name},
                                {"episode", e},
                                {"feasible", r.feasible},
                                {"blocked", r.blocked},
                                {"min_distance", r.min_distance},
                                {"plan_cost", r.feasible ? nlohmann::json(r.plan_cost)
                                                         : nlohmann::json(nullptr)},
                                {"plan_latency_ms", r.plan_latency_ms}};
            if (r.contact_time) line["contact_time"] = *r.contact_time;
            if (r.diag) line["sample"] = r.diag->to_json();
            diagnostics << line.dump() << "\n";
        }

        // Optional trace dump of the first few episodes.
        for (std::size_t e = 0; e < std::min<std::size_t>(config.evaluate.trace_episodes,
                                                          config.evaluate.episodes);
             ++e) {
            Rng episode_rng(config.seed, Rng::mix(0x657069ULL, e));
            PuckState initial = sample_launch(config.table, config.launch, episode_rng);
            EpisodeResult traced = run_episode(config.table, config.arm, planner, initial,
                                               config.episode, Rng::mix(config.seed, e), true);
            std::string trace_path =
                out_path(config, "trace_" + spec.name + "_" + std::to_string(e) + ".jsonl");
            std::ostringstream ts;
            for (const TickRecord& t : traced.trace) ts << tick_to_json(t).dump() << "\n";
            io::write_text_file(trace_path, ts.str());
        }
    }

    out.csv_path = out_path(config, "metrics.csv");
    io::write_text_file(out.csv_path, metrics_to_csv(out.reports));
    out.diagnostics_path = out_path(config, "diagnostics.jsonl");
    io::write_text_file(out.diagnostics_path, diagnostics.str());
    return out;
}

SweepOutput cmd_sweep(const ExperimentConfig& config) {
    ModelBundle bundle = load_bundle_checked(config);
    if (config.sweep.samplers.empty()) throw ConfigError("cmd_sweep: no samplers configured");
    if (config.sweep.budgets_ms.empty()) throw ConfigError("cmd_sweep: no budgets configured");

    SweepOutput out;
    for (const SamplerSpec& spec : config.sweep.samplers) {
        double ms = measure_ms_per_step(config, bundle, spec);
        for (double budget : config.sweep.budgets_ms) {
            std::size_t T = spec.T != 0
                                ? spec.T
                                : std::min(time_budget_steps(budget, ms), bundle.schedule.T);
            SamplerConfig cfg = to_sampler_config(spec, T, config);
            int label = bundle.label_id(spec.condition);
            DiffusionPlanner planner(bundle, config.arm, cfg, label);
            {
                auto [puck, window] = probe_episode(config);
                planner.plan(puck, window, 0);
            }
            EvalSummary summary =
                run_eval(config.table, config.arm, planner, config.sweep.episodes, config.seed,
                         config.episode, config.launch, config.parallel);
            out.rows.push_back(to_report(spec.name, summary, cfg, budget));
            log_info("sweep '" + spec.name + "' @ " + fmt17(budget) + " ms: block rate " +
                     fmt17(summary.block_rate) + " (T = " + std::to_string(T) + ")");
        }
    }
    out.csv_path = out_path(config, "sweep.csv");
    io::write_text_file(out.csv_path, metrics_to_csv(out.rows));
    return out;
}

} // namespace kcgg
