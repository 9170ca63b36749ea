#include "kcgg/network.hpp"

#include <cmath>
#include <string>

#include "kcgg/errors.hpp"
#include "kcgg/rng.hpp"

namespace kcgg {

void NetworkArch::validate() const {
    if (input_dim == 0) throw ConfigError("NetworkArch: input_dim must be positive");
    if (width == 0) throw ConfigError("NetworkArch: width must be positive");
    if (time_embed_dim == 0 || time_embed_dim % 2 != 0) {
        throw ConfigError("NetworkArch: time_embed_dim must be a positive even number");
    }
    if (cond_embed_dim == 0) throw ConfigError("NetworkArch: cond_embed_dim must be positive");
}

namespace {

Tensor uniform_init(std::size_t rows, std::size_t cols, double limit, Rng& rng) {
    Tensor t = Tensor::zeros({rows, cols});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
    return t;
}

} // namespace

ScoreNetwork::ScoreNetwork(NetworkArch arch, std::uint64_t init_seed) : arch_(arch) {
    arch_.validate();
    Rng rng(init_seed, 0x6e657477ULL);

    const std::size_t ctx = arch_.time_embed_dim + arch_.cond_embed_dim;
    const std::size_t in0 = arch_.input_dim + ctx;
    const std::size_t w = arch_.width;

    auto push = [&](const std::string& name, Tensor t) {
        param_names_.push_back(name);
        params_.push_back(std::move(t));
    };

    push("w_in", uniform_init(in0, w, std::sqrt(6.0 / static_cast<double>(in0)), rng));
    push("b_in", Tensor::zeros({w}));
    for (std::size_t b = 0; b < arch_.num_blocks; ++b) {
        const std::string p = "block" + std::to_string(b) + ".";
        push(p + "w1", uniform_init(w, w, std::sqrt(6.0 / static_cast<double>(w)), rng));
        push(p + "b1", Tensor::zeros({w}));
        // FiLM modulation from the time/condition context; starts neutral.
        push(p + "film_scale", Tensor::zeros({ctx, w}));
        push(p + "film_shift", Tensor::zeros({ctx, w}));
        // Residual branches start at zero so the trunk begins as identity.
        push(p + "w2", Tensor::zeros({w, w}));
        push(p + "b2", Tensor::zeros({w}));
    }
    // Zero-initialized output keeps the untrained score identically zero.
    push("w_out", Tensor::zeros({w, arch_.input_dim}));
    push("b_out", Tensor::zeros({arch_.input_dim}));

    Tensor embed = Tensor::zeros({arch_.cond_vocab + 1, arch_.cond_embed_dim});
    for (std::size_t i = 0; i < embed.size(); ++i) embed[i] = 0.1 * rng.normal();
    push("cond_embed", std::move(embed));
}

void ScoreNetwork::set_params(std::vector<Tensor> params) {
    if (params.size() != params_.size()) {
        throw ShapeError("ScoreNetwork::set_params: expected " + std::to_string(params_.size()) +
                         " tensors, got " + std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i].same_shape(params_[i])) {
            throw ShapeError("ScoreNetwork::set_params: shape mismatch for " + param_names_[i] +
                             ": " + params[i].shape_str() + " vs " + params_[i].shape_str());
        }
    }
    params_ = std::move(params);
}

Tensor ScoreNetwork::time_embedding(const std::vector<double>& time_inputs) const {
    const std::size_t half = arch_.time_embed_dim / 2;
    Tensor emb = Tensor::zeros({time_inputs.size(), arch_.time_embed_dim});
    for (std::size_t r = 0; r < time_inputs.size(); ++r) {
        for (std::size_t k = 0; k < half; ++k) {
            double freq = std::exp(-std::log(10000.0) * static_cast<double>(k) /
                                   static_cast<double>(half));
            double angle = time_inputs[r] * freq;
            emb.at(r, 2 * k) = std::sin(angle);
            emb.at(r, 2 * k + 1) = std::cos(angle);
        }
    }
    return emb;
}

std::vector<std::size_t> ScoreNetwork::cond_rows(const std::vector<int>& cond,
                                                 std::size_t batch) const {
    if (cond.size() != batch) {
        throw ShapeError("ScoreNetwork: cond size " + std::to_string(cond.size()) +
                         " does not match batch " + std::to_string(batch));
    }
    std::vector<std::size_t> rows(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        int c = cond[i];
        if (c < -1 || c >= static_cast<int>(arch_.cond_vocab)) {
            throw Error("ScoreNetwork: unknown condition label " + std::to_string(c) +
                        " (vocabulary size " + std::to_string(arch_.cond_vocab) + ")");
        }
        rows[i] = static_cast<std::size_t>(c + 1); // row 0 = unconditioned
    }
    return rows;
}

ScoreNetwork::Forward ScoreNetwork::forward_eps(ad::Graph& g, ad::Value x,
                                                const std::vector<double>& time_inputs,
                                                const std::vector<int>& cond) const {
    const Tensor& xv = x.tensor();
    if (xv.rank() != 2 || xv.shape()[1] != arch_.input_dim) {
        throw ShapeError("ScoreNetwork: input must be (B x " + std::to_string(arch_.input_dim) +
                         "), got " + xv.shape_str());
    }
    const std::size_t batch = xv.shape()[0];
    if (time_inputs.size() != batch) {
        throw ShapeError("ScoreNetwork: time_inputs size does not match batch");
    }

    Forward fwd;
    fwd.params.reserve(params_.size());
    for (const Tensor& p : params_) fwd.params.push_back(g.input(p));

    std::size_t pi = 0;
    auto next = [&]() { return fwd.params[pi++]; };

    ad::Value w_in = next(), b_in = next();
    struct Block {
        ad::Value w1, b1, film_scale, film_shift, w2, b2;
    };
    std::vector<Block> blocks(arch_.num_blocks);
    for (auto& blk : blocks) {
        blk.w1 = next();
        blk.b1 = next();
        blk.film_scale = next();
        blk.film_shift = next();
        blk.w2 = next();
        blk.b2 = next();
    }
    ad::Value w_out = next(), b_out = next();
    ad::Value cond_embed = next();

    ad::Value te = g.constant(time_embedding(time_inputs));
    ad::Value ce = ad::gather_rows(cond_embed, cond_rows(cond, batch));
    ad::Value ctx = ad::concat_cols(te, ce);

    ad::Value h = ad::silu(ad::add_rowvec(ad::matmul(ad::concat_cols(x, ctx), w_in), b_in));
    for (const auto& blk : blocks) {
        ad::Value pre = ad::add_rowvec(ad::matmul(h, blk.w1), blk.b1);
        // FiLM: pre * (1 + scale(ctx)) + shift(ctx), per hidden unit.
        ad::Value gain = ad::add(ad::matmul(ctx, blk.film_scale),
                                 g.constant(Tensor::full({batch, arch_.width}, 1.0)));
        ad::Value modulated = ad::add(ad::mul(pre, gain), ad::matmul(ctx, blk.film_shift));
        ad::Value z = ad::silu(modulated);
        ad::Value z2 = ad::add_rowvec(ad::matmul(z, blk.w2), blk.b2);
        h = ad::add(h, z2);
    }
    fwd.eps = ad::add_rowvec(ad::matmul(h, w_out), b_out);
    return fwd;
}

ad::Value ScoreNetwork::score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                                   const std::vector<int>& cond) const {
    if (!(step.alpha_bar < 1.0)) {
        throw ContractError("ScoreNetwork::score_node: alpha_bar must be < 1");
    }
    Forward fwd = forward_eps(g, x, std::vector<double>(x.tensor().shape()[0], step.time_input),
                              cond);
    // z_theta = -sqrt(1 - alpha_bar) * s_theta
    return ad::scale(fwd.eps, -1.0 / std::sqrt(1.0 - step.alpha_bar));
}

} // namespace kcgg
