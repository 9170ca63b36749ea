#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcgg/airhockey.hpp"
#include "kcgg/samplers.hpp"

namespace kcgg {

/// One sampler to evaluate. T = 0 derives the step count from the section's
/// wall-clock budget via a measured probe; a fixed T >= 2 keeps the command
/// bitwise reproducible.
struct SamplerSpec {
    std::string name;
    Method method = Method::Unconstrained;
    std::size_t batch_size = 16;
    double eta = 1.0;
    KcggScale kcgg_scale = KcggScale::OneMinusAlphaBar;
    bool batch_filter = true;
    std::size_t T = 0;
    std::string condition; // style name, empty = unconditioned
};

struct GenerateSection {
    std::size_t demos_per_style = 50;
};

struct TrainSection {
    std::size_t epochs = 400;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double cond_dropout = 0.2;
    std::size_t schedule_T = 100;
    std::size_t width = 256;
    std::size_t num_blocks = 3;
    std::size_t time_embed_dim = 32;
    std::size_t cond_embed_dim = 16;
};

struct EvaluateSection {
    std::size_t episodes = 200;
    double budget_ms = 200.0;
    std::size_t trace_episodes = 0;
    std::vector<SamplerSpec> samplers;
};

struct SweepSection {
    std::size_t episodes = 200;
    std::vector<double> budgets_ms{50.0, 100.0, 150.0, 200.0, 300.0};
    std::vector<SamplerSpec> samplers;
};

/// Experiment configuration file: versioned JSON with strict key checking
/// (unknown keys are rejected at every level). Every section except the seed
/// falls back to the library defaults when omitted.
struct ExperimentConfig {
    int schema_version = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::string dataset_path;
    std::string model_path;
    unsigned parallel = 1;

    ArmSpec arm;
    TableSpec table;
    EpisodeParams episode;
    LaunchParams launch;

    GenerateSection generate;
    TrainSection train;
    EvaluateSection evaluate;
    SweepSection sweep;

    static ExperimentConfig defaults();
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);

    nlohmann::json to_json() const;
    void validate() const;
};

/// Default sampler suite mirroring the four defend rows: unconstrained with
/// and without the batch filter, projection guidance, and KCGG.
std::vector<SamplerSpec> default_sampler_suite();

} // namespace kcgg
