#include "kcgg/guidance.hpp"

#include "kcgg/errors.hpp"

namespace kcgg {

StrikeGuidance::StrikeGuidance(StrikeConstraint constraint, ArmSpec arm,
                               const Normalizer& normalizer, std::size_t num_states)
    : constraint_(std::move(constraint)),
      arm_(std::move(arm)),
      state_dim_(normalizer.dim()),
      half_range_(normalizer.flat_half_range(num_states)),
      center_(normalizer.flat_center(num_states)) {
    constraint_.validate(num_states);
    if (state_dim_ != 2 * arm_.dof()) {
        throw ShapeError("StrikeGuidance: normalizer dim " + std::to_string(state_dim_) +
                         " does not match arm state dim " + std::to_string(2 * arm_.dof()));
    }
}

ad::Value StrikeGuidance::cost_node(ad::Graph& g, ad::Value rows) const {
    const Tensor& rv = rows.tensor();
    if (rv.rank() != 2 || rv.shape()[1] != half_range_.size()) {
        throw ShapeError("StrikeGuidance: batch must be (B x " +
                         std::to_string(half_range_.size()) + "), got " + rv.shape_str());
    }
    const std::size_t batch = rv.shape()[0];
    ad::Value half = g.constant(half_range_);
    ad::Value center = g.constant(center_);
    ad::Value total;
    for (std::size_t r = 0; r < batch; ++r) {
        ad::Value phys = ad::add(ad::mul(ad::row(rows, r), half), center);
        ad::Value c = strike_cost_node(constraint_, arm_, g, phys, state_dim_);
        total = r == 0 ? c : ad::add(total, c);
    }
    return total;
}

double StrikeGuidance::cost_value(std::span<const double> physical_row) const {
    return strike_cost_value(constraint_, arm_, physical_row, state_dim_);
}

} // namespace kcgg
