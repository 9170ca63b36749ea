#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kcgg/score_model.hpp"

namespace kcgg {

/// Architecture of the epsilon-prediction MLP: the flattened trajectory plus
/// a sinusoidal time embedding and a learned condition-label embedding feed
/// an input projection and a stack of residual blocks. The output layer is
/// zero-initialized so an untrained model predicts zero noise.
struct NetworkArch {
    std::size_t input_dim = 0;       // flattened trajectory dimension D
    std::size_t width = 256;
    std::size_t num_blocks = 3;
    std::size_t time_embed_dim = 32; // must be even
    std::size_t cond_embed_dim = 16;
    std::size_t cond_vocab = 0;      // labels; embedding row 0 is "unconditioned"

    void validate() const;
};

class ScoreNetwork final : public ScoreModel {
public:
    ScoreNetwork(NetworkArch arch, std::uint64_t init_seed);

    struct Forward {
        ad::Value eps;                  // (B x D) noise prediction
        std::vector<ad::Value> params;  // leaf nodes, one per parameter tensor
    };

    /// Builds the epsilon prediction for a (B x D) batch. time_inputs holds
    /// one schedule time value per row, cond one label per row (-1 = none).
    Forward forward_eps(ad::Graph& g, ad::Value x, const std::vector<double>& time_inputs,
                        const std::vector<int>& cond) const;

    std::size_t dim() const override { return arch_.input_dim; }
    ad::Value score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                         const std::vector<int>& cond) const override;

    const NetworkArch& arch() const { return arch_; }
    std::size_t param_count() const { return params_.size(); }
    const std::vector<Tensor>& params() const { return params_; }
    const std::vector<std::string>& param_names() const { return param_names_; }
    /// Replaces all parameters (checkpoint load, optimizer step).
    void set_params(std::vector<Tensor> params);
    Tensor& param(std::size_t i) { return params_[i]; }

    /// B x time_embed_dim sinusoidal features.
    Tensor time_embedding(const std::vector<double>& time_inputs) const;

private:
    std::vector<std::size_t> cond_rows(const std::vector<int>& cond, std::size_t batch) const;

    NetworkArch arch_;
    std::vector<Tensor> params_;
    std::vector<std::string> param_names_;
};

} // namespace kcgg
