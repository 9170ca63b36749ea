#pragma once

#include <cstddef>
#include <span>

#include "kcgg/autodiff.hpp"
#include "kcgg/constraints.hpp"
#include "kcgg/normalizer.hpp"

namespace kcgg {

/// Sampler-facing cost over batches of model-space trajectory rows. The
/// node form returns the sum of per-row costs, which decouples under
/// backward() into one gradient per row.
class GuidanceCost {
public:
    virtual ~GuidanceCost() = default;

    /// Scalar node: total cost of a (B x D) model-space batch.
    virtual ad::Value cost_node(ad::Graph& g, ad::Value rows) const = 0;

    /// Forward-only cost of one denormalized (physical) row.
    virtual double cost_value(std::span<const double> physical_row) const = 0;
};

/// Strike cost adapter: denormalizes each model-space row inside the graph
/// (the constraint operates in meters) and applies the FK strike cost.
class StrikeGuidance final : public GuidanceCost {
public:
    StrikeGuidance(StrikeConstraint constraint, ArmSpec arm, const Normalizer& normalizer,
                   std::size_t num_states);

    ad::Value cost_node(ad::Graph& g, ad::Value rows) const override;
    double cost_value(std::span<const double> physical_row) const override;

    const StrikeConstraint& constraint() const { return constraint_; }

private:
    StrikeConstraint constraint_;
    ArmSpec arm_;
    std::size_t state_dim_;
    Tensor half_range_;
    Tensor center_;
};

} // namespace kcgg
