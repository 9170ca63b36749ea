// kcgg command-line harness: generate demonstrations, train the trajectory
// diffusion model, and run the defend evaluations and sampling-time sweeps.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kcgg/config.hpp"
#include "kcgg/errors.hpp"
#include "kcgg/harness.hpp"
#include "kcgg/logging.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> parallel;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seed, "Override the config seed");
    cmd->add_option("--out", flags.out_dir, "Override the output directory");
    cmd->add_option("--parallel", flags.parallel, "Episode-level worker threads");
}

kcgg::ExperimentConfig load_config(const CommonFlags& flags) {
    kcgg::ExperimentConfig config = kcgg::ExperimentConfig::load(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.parallel) config.parallel = *flags.parallel;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory diffusion planning with kinematic constraint gradient guidance"};
    app.require_subcommand(1);

    CommonFlags generate_flags, train_flags, evaluate_flags, sweep_flags;
    CLI::App* generate = app.add_subcommand("generate-data", "Build the demonstration dataset");
    add_common(generate, generate_flags);
    CLI::App* train = app.add_subcommand("train", "Train the score network");
    add_common(train, train_flags);
    CLI::App* evaluate = app.add_subcommand("evaluate", "Defend evaluation across samplers");
    add_common(evaluate, evaluate_flags);
    CLI::App* sweep = app.add_subcommand("sweep", "Block rate vs sampling-time budget");
    add_common(sweep, sweep_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            std::string path = kcgg::cmd_generate_data(load_config(generate_flags));
            std::printf("dataset: %s\n", path.c_str());
        } else if (train->parsed()) {
            kcgg::TrainOutput out = kcgg::cmd_train(load_config(train_flags));
            std::printf("model: %s\nloss_csv: %s\n", out.model_path.c_str(),
                        out.loss_csv_path.c_str());
        } else if (evaluate->parsed()) {
            kcgg::EvaluateOutput out = kcgg::cmd_evaluate(load_config(evaluate_flags));
            std::printf("metrics: %s\ndiagnostics: %s\n", out.csv_path.c_str(),
                        out.diagnostics_path.c_str());
        } else if (sweep->parsed()) {
            kcgg::SweepOutput out = kcgg::cmd_sweep(load_config(sweep_flags));
            std::printf("sweep: %s\n", out.csv_path.c_str());
        }
    } catch (const kcgg::ConfigError& e) {
        kcgg::log_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        kcgg::log_error(e.what());
        return 2;
    }
    return 0;
}
