#pragma once

#include <cstddef>
#include <vector>

#include "kcgg/autodiff.hpp"
#include "kcgg/schedule.hpp"
#include "kcgg/tensor.hpp"

namespace kcgg {

/// A score function s(tau_i, i, cond) over flattened trajectories. The node
/// form is what samplers differentiate through: the returned node must be a
/// differentiable function of x on the same graph (this is what lets the
/// constraint gradient flow through the model itself).
///
/// cond carries one label id per batch row; -1 means unconditioned.
class ScoreModel {
public:
    virtual ~ScoreModel() = default;

    /// Flattened trajectory dimension D.
    virtual std::size_t dim() const = 0;

    /// Score of a (B x D) batch node, same shape.
    virtual ad::Value score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                                 const std::vector<int>& cond) const = 0;

    /// Forward-only convenience wrapper around score_node().
    Tensor score(const Tensor& x, const ScheduleStep& step, const std::vector<int>& cond) const;
};

/// Eq.-style one-shot clean-trajectory estimate
///   tau0_hat = (tau_i + (1 - alpha_bar_i) * s(tau_i)) / sqrt(alpha_bar_i)
/// built on the graph so gradients flow through both the score model and
/// anything downstream of the estimate.
ad::Value predict_tau0_node(ad::Graph& g, const ScoreModel& model, ad::Value x,
                            const ScheduleStep& step, const std::vector<int>& cond);

Tensor predict_tau0(const ScoreModel& model, const Tensor& x, const ScheduleStep& step,
                    const std::vector<int>& cond);

} // namespace kcgg
