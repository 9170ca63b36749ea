#pragma once

#include <string>
#include <vector>

#include "kcgg/checkpoint.hpp"
#include "kcgg/config.hpp"
#include "kcgg/metrics.hpp"

namespace kcgg {

/// Builds the demonstration dataset and writes it to config.dataset_path.
/// Returns the path written.
std::string cmd_generate_data(const ExperimentConfig& config);

struct TrainOutput {
    std::string model_path;
    std::string loss_csv_path;
    std::vector<double> loss_curve;
};

/// Trains the score network on the dataset, writes the checkpoint and a
/// per-epoch loss CSV under out_dir.
TrainOutput cmd_train(const ExperimentConfig& config);

struct EvaluateOutput {
    std::vector<MetricsReport> reports;
    std::string csv_path;
    std::string diagnostics_path;
};

/// Runs every configured sampler over the shared episode set and writes
/// metrics.csv plus JSON-lines diagnostics. Samplers with T = 0 derive their
/// step count from the section budget via a measured, warm-started probe
/// (that path is timing-dependent by design; pin T for bitwise reruns).
EvaluateOutput cmd_evaluate(const ExperimentConfig& config);

struct SweepOutput {
    std::vector<MetricsReport> rows; // one row per (sampler, budget)
    std::string csv_path;
};

/// Block rate against wall-clock budget for every configured sampler.
SweepOutput cmd_sweep(const ExperimentConfig& config);

/// Loads the checkpoint and cross-checks it against the config's arm.
ModelBundle load_bundle_checked(const ExperimentConfig& config);

/// Median ms/step of the given sampler on a probe episode (after a warm-up
/// sample), used to translate budgets into step counts.
double measure_ms_per_step(const ExperimentConfig& config, const ModelBundle& bundle,
                           const SamplerSpec& spec);

} // namespace kcgg
