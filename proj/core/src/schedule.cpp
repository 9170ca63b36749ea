#include "kcgg/schedule.hpp"

#include <cmath>
#include <string>

#include "kcgg/errors.hpp"
#include "kcgg/trajectory.hpp"

namespace kcgg {

namespace {

constexpr double kCosineShift = 0.008;
constexpr double kBetaMax = 0.999;

double cosine_f(double u) {
    double angle = ((u + kCosineShift) / (1.0 + kCosineShift)) * M_PI / 2.0;
    double c = std::cos(angle);
    return c * c;
}

void finish_from_betas(NoiseSchedule& s) {
    const std::size_t T = s.T;
    s.alpha.resize(T);
    s.alpha_bar.resize(T);
    s.posterior_sigma.resize(T);
    double bar = 1.0;
    for (std::size_t i = 0; i < T; ++i) {
        s.alpha[i] = 1.0 - s.beta[i];
        double bar_prev = bar;
        bar *= s.alpha[i];
        s.alpha_bar[i] = bar;
        double var = s.beta[i] * (1.0 - bar_prev) / (1.0 - bar);
        s.posterior_sigma[i] = std::sqrt(std::max(var, 0.0));
    }
}

} // namespace

NoiseSchedule NoiseSchedule::cosine(std::size_t steps) {
    if (steps < 2) {
        throw ConfigError("NoiseSchedule::cosine: T must be >= 2, got " + std::to_string(steps));
    }
    NoiseSchedule s;
    s.T = steps;
    s.beta.resize(steps);
    s.time_input.resize(steps);
    const double f0 = cosine_f(0.0);
    double prev = f0;
    for (std::size_t i = 0; i < steps; ++i) {
        double cur = cosine_f(static_cast<double>(i + 1) / static_cast<double>(steps));
        s.beta[i] = std::min(1.0 - cur / prev, kBetaMax);
        s.time_input[i] = static_cast<double>(i);
        prev = cur;
    }
    finish_from_betas(s);
    return s;
}

NoiseSchedule NoiseSchedule::restride(std::size_t new_T) const {
    if (new_T < 2) {
        throw ConfigError("NoiseSchedule::restride: T must be >= 2, got " + std::to_string(new_T));
    }
    if (new_T > T) {
        throw ConfigError("NoiseSchedule::restride: cannot stride " + std::to_string(T) +
                          " steps up to " + std::to_string(new_T));
    }
    if (new_T == T) return *this;

    NoiseSchedule s;
    s.T = new_T;
    s.beta.resize(new_T);
    s.time_input.resize(new_T);
    double prev_bar = 1.0;
    for (std::size_t k = 0; k < new_T; ++k) {
        auto idx = static_cast<std::size_t>(std::llround(
            static_cast<double>(k) * static_cast<double>(T - 1) / static_cast<double>(new_T - 1)));
        double bar = alpha_bar[idx];
        s.beta[k] = std::min(1.0 - bar / prev_bar, kBetaMax);
        s.time_input[k] = time_input[idx];
        prev_bar = bar;
    }
    finish_from_betas(s);
    return s;
}

ScheduleStep NoiseSchedule::step(std::size_t i) const {
    if (i >= T) {
        throw ContractError("NoiseSchedule::step: index " + std::to_string(i) +
                            " out of range for T = " + std::to_string(T));
    }
    ScheduleStep st;
    st.index = i;
    st.beta = beta[i];
    st.alpha = alpha[i];
    st.alpha_bar = alpha_bar[i];
    st.alpha_bar_prev = i == 0 ? 1.0 : alpha_bar[i - 1];
    st.posterior_sigma = posterior_sigma[i];
    st.time_input = time_input[i];
    return st;
}

void NoiseSchedule::validate() const {
    if (T < 2 || beta.size() != T || alpha.size() != T || alpha_bar.size() != T ||
        posterior_sigma.size() != T || time_input.size() != T) {
        throw ConfigError("NoiseSchedule: inconsistent array lengths");
    }
    double bar = 1.0;
    for (std::size_t i = 0; i < T; ++i) {
        if (!(beta[i] > 0.0 && beta[i] < 1.0)) {
            throw ConfigError("NoiseSchedule: beta[" + std::to_string(i) + "] out of (0, 1)");
        }
        if (alpha[i] != 1.0 - beta[i]) {
            throw ConfigError("NoiseSchedule: alpha[" + std::to_string(i) + "] != 1 - beta");
        }
        bar *= alpha[i];
        if (alpha_bar[i] != bar) {
            throw ConfigError("NoiseSchedule: alpha_bar[" + std::to_string(i) +
                              "] is not the cumulative product of alpha");
        }
        if (i > 0 && !(alpha_bar[i] < alpha_bar[i - 1])) {
            throw ConfigError("NoiseSchedule: alpha_bar not strictly decreasing at " +
                              std::to_string(i));
        }
    }
    if (!(alpha_bar.front() > 0.99)) {
        throw ConfigError("NoiseSchedule: alpha_bar[0] must exceed 0.99");
    }
    if (!(alpha_bar.back() < 0.01)) {
        throw ConfigError("NoiseSchedule: alpha_bar[T-1] must be below 0.01");
    }
}

PosteriorCoeffs posterior_coefficients(const NoiseSchedule& schedule, std::size_t i) {
    // Posterior mean of the reverse step,
    //   mu = sqrt(alpha_i) (1 - alpha_bar_{i-1}) / (1 - alpha_bar_i) * tau_i
    //      + sqrt(alpha_bar_{i-1}) beta_i / (1 - alpha_bar_i) * tau0_hat.
    // Only the leading alpha factors sit under the square roots; putting the
    // whole fractions under them breaks the consistency check
    // E[mu | tau_i = sqrt(alpha_bar_i) tau0] == sqrt(alpha_bar_{i-1}) tau0
    // and inflates every step by a constant factor.
    ScheduleStep st = schedule.step(i);
    PosteriorCoeffs c;
    double denom = 1.0 - st.alpha_bar;
    c.coeff_tau_i = std::sqrt(st.alpha) * (1.0 - st.alpha_bar_prev) / denom;
    c.coeff_tau0 = std::sqrt(st.alpha_bar_prev) * st.beta / denom;
    c.sigma = st.posterior_sigma;
    return c;
}

Tensor forward_noise(const NoiseSchedule& schedule, const Tensor& tau0, std::size_t i,
                     const Tensor& z) {
    if (i >= schedule.T) {
        throw ContractError("forward_noise: step index " + std::to_string(i) +
                            " out of range for T = " + std::to_string(schedule.T));
    }
    if (!tau0.same_shape(z)) {
        throw ShapeError("forward_noise: noise shape " + z.shape_str() +
                         " does not match trajectory shape " + tau0.shape_str());
    }
    double a = std::sqrt(schedule.alpha_bar[i]);
    double b = std::sqrt(1.0 - schedule.alpha_bar[i]);
    Tensor out = Tensor::zeros(tau0.shape());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * tau0[k] + b * z[k];
    return out;
}

} // namespace kcgg
