#include "kcgg/score_model.hpp"

#include <cmath>

#include "kcgg/errors.hpp"

namespace kcgg {

Tensor ScoreModel::score(const Tensor& x, const ScheduleStep& step,
                         const std::vector<int>& cond) const {
    ad::Graph g;
    ad::Value xv = g.input(x);
    return score_node(g, xv, step, cond).tensor();
}

ad::Value predict_tau0_node(ad::Graph& g, const ScoreModel& model, ad::Value x,
                            const ScheduleStep& step, const std::vector<int>& cond) {
    if (!(step.alpha_bar > 0.0)) {
        throw ContractError("predict_tau0: alpha_bar must be positive");
    }
    ad::Value s = model.score_node(g, x, step, cond);
    ad::Value inner = ad::add(x, ad::scale(s, 1.0 - step.alpha_bar));
    return ad::scale(inner, 1.0 / std::sqrt(step.alpha_bar));
}

Tensor predict_tau0(const ScoreModel& model, const Tensor& x, const ScheduleStep& step,
                    const std::vector<int>& cond) {
    ad::Graph g;
    ad::Value xv = g.input(x);
    return predict_tau0_node(g, model, xv, step, cond).tensor();
}

} // namespace kcgg
