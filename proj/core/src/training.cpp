#include "kcgg/training.hpp"

#include <cmath>
#include <string>

#include "kcgg/errors.hpp"
#include "kcgg/logging.hpp"
#include "kcgg/rng.hpp"

namespace kcgg {

std::vector<double> train(ScoreNetwork& net, const std::vector<Trajectory>& dataset,
                          const std::vector<int>& labels, const NoiseSchedule& schedule,
                          const Normalizer& normalizer, const TrainOptions& options) {
    if (dataset.empty()) throw Error("train: empty dataset");
    if (labels.size() != dataset.size()) {
        throw ShapeError("train: labels size " + std::to_string(labels.size()) +
                         " does not match dataset size " + std::to_string(dataset.size()));
    }
    const std::size_t d_state = dataset.front().state_dim;
    const std::size_t rows = dataset.front().num_states();
    const std::size_t dim = d_state * rows;
    if (dim != net.dim()) {
        throw ShapeError("train: flattened trajectory dim " + std::to_string(dim) +
                         " does not match network input dim " + std::to_string(net.dim()));
    }
    for (const Trajectory& t : dataset) {
        if (t.state_dim != d_state || t.num_states() != rows) {
            throw ShapeError("train: all trajectories must share one shape");
        }
    }

    // Pre-normalize once; training only touches model space.
    std::vector<std::vector<double>> data;
    data.reserve(dataset.size());
    for (const Trajectory& t : dataset) data.push_back(normalizer.normalized(t));

    const std::size_t n = dataset.size();
    const std::size_t batch = options.batch_size == 0 ? 1 : options.batch_size;
    const std::size_t steps_per_epoch = (n + batch - 1) / batch;

    Rng rng(options.seed, 0x747261696eULL);

    std::vector<Tensor> moment1, moment2;
    moment1.reserve(net.param_count());
    moment2.reserve(net.param_count());
    for (const Tensor& p : net.params()) {
        moment1.push_back(Tensor::zeros(p.shape()));
        moment2.push_back(Tensor::zeros(p.shape()));
    }
    std::size_t adam_step = 0;

    std::vector<double> curve;
    curve.reserve(options.epochs);

    std::vector<double> time_inputs(batch);
    std::vector<int> cond(batch);

    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        double progress = options.epochs > 1
                              ? static_cast<double>(epoch) / static_cast<double>(options.epochs - 1)
                              : 1.0;
        double lr = options.learning_rate *
                    (options.final_lr_fraction +
                     (1.0 - options.final_lr_fraction) * 0.5 * (1.0 + std::cos(M_PI * progress)));
        double epoch_loss = 0.0;
        for (std::size_t step = 0; step < steps_per_epoch; ++step) {
            Tensor x = Tensor::zeros({batch, dim});
            Tensor target = Tensor::zeros({batch, dim});
            for (std::size_t b = 0; b < batch; ++b) {
                std::size_t pick = rng.uniform_index(n);
                std::size_t i = rng.uniform_index(schedule.T);
                double a = std::sqrt(schedule.alpha_bar[i]);
                double s = std::sqrt(1.0 - schedule.alpha_bar[i]);
                const std::vector<double>& tau0 = data[pick];
                for (std::size_t c = 0; c < dim; ++c) {
                    double z = rng.normal();
                    target.at(b, c) = z;
                    x.at(b, c) = a * tau0[c] + s * z;
                }
                time_inputs[b] = schedule.time_input[i];
                int label = labels[pick];
                if (label >= 0 && options.cond_dropout > 0.0 &&
                    rng.uniform() < options.cond_dropout) {
                    label = -1;
                }
                cond[b] = label;
            }

            ad::Graph g;
            ad::Value xv = g.input(std::move(x));
            ScoreNetwork::Forward fwd = net.forward_eps(g, xv, time_inputs, cond);
            ad::Value diff = ad::sub(fwd.eps, g.constant(std::move(target)));
            ad::Value loss = ad::scale(ad::sum(ad::mul(diff, diff)),
                                       1.0 / static_cast<double>(batch));
            double loss_value = loss.scalar();
            if (!std::isfinite(loss_value)) {
                throw Error("train: loss became non-finite at epoch " + std::to_string(epoch) +
                            " step " + std::to_string(step) + "; lower the learning rate");
            }
            epoch_loss += loss_value;

            g.backward(loss);
            double clip_scale = 1.0;
            if (options.grad_clip > 0.0) {
                double norm2 = 0.0;
                for (std::size_t p = 0; p < net.param_count(); ++p) {
                    const Tensor& grad = g.grad(fwd.params[p]);
                    for (std::size_t k = 0; k < grad.size(); ++k) norm2 += grad[k] * grad[k];
                }
                double norm = std::sqrt(norm2);
                if (norm > options.grad_clip) clip_scale = options.grad_clip / norm;
            }
            ++adam_step;
            double bc1 = 1.0 - std::pow(options.beta1, static_cast<double>(adam_step));
            double bc2 = 1.0 - std::pow(options.beta2, static_cast<double>(adam_step));
            for (std::size_t p = 0; p < net.param_count(); ++p) {
                const Tensor& grad = g.grad(fwd.params[p]);
                Tensor& m = moment1[p];
                Tensor& v = moment2[p];
                Tensor& weights = net.param(p);
                for (std::size_t k = 0; k < weights.size(); ++k) {
                    double gk = grad[k] * clip_scale;
                    m[k] = options.beta1 * m[k] + (1.0 - options.beta1) * gk;
                    v[k] = options.beta2 * v[k] + (1.0 - options.beta2) * gk * gk;
                    weights[k] -= lr * (m[k] / bc1) /
                                  (std::sqrt(v[k] / bc2) + options.adam_eps);
                }
            }
        }
        curve.push_back(epoch_loss / static_cast<double>(steps_per_epoch));
        if ((epoch + 1) % 100 == 0 || epoch + 1 == options.epochs) {
            log_debug("train: epoch " + std::to_string(epoch + 1) + "/" +
                      std::to_string(options.epochs) + " loss " + std::to_string(curve.back()));
        }
    }
    return curve;
}

} // namespace kcgg
