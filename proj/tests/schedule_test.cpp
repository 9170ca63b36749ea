#include <doctest.h>

#include <cmath>
#include <vector>

#include "kcgg/errors.hpp"
#include "kcgg/rng.hpp"
#include "kcgg/schedule.hpp"

using namespace kcgg;

namespace {

// Independent reimplementation of the cosine curve for cross-checks.
double cosine_alpha_bar(std::size_t i, std::size_t T) {
    const double s = 0.008;
    auto f = [s](double u) {
        double c = std::cos(((u + s) / (1.0 + s)) * M_PI / 2.0);
        return c * c;
    };
    return f(static_cast<double>(i + 1) / static_cast<double>(T)) / f(0.0);
}

} // namespace

TEST_CASE("cosine schedule endpoints and monotonicity at T = 20") {
    NoiseSchedule s = NoiseSchedule::cosine(20);
    CHECK(s.alpha_bar.front() > 0.99);
    CHECK(s.alpha_bar.back() < 0.01);
    for (std::size_t i = 1; i < s.T; ++i) CHECK(s.alpha_bar[i] < s.alpha_bar[i - 1]);
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("cosine schedule matches the direct formula where unclipped") {
    NoiseSchedule s = NoiseSchedule::cosine(20);
    for (std::size_t i = 0; i + 1 < s.T; ++i) {
        CHECK(std::abs(s.alpha_bar[i] - cosine_alpha_bar(i, 20)) < 1e-12);
    }
}

TEST_CASE("beta clipping engages only at the largest step") {
    for (std::size_t T : {20u, 50u, 100u}) {
        NoiseSchedule s = NoiseSchedule::cosine(T);
        for (std::size_t i = 0; i + 1 < s.T; ++i) {
            CHECK(s.beta[i] < 0.999);
            // Unclipped entries equal the ratio form exactly.
            double ratio = 1.0 - cosine_alpha_bar(i, T) / (i == 0 ? 1.0 : cosine_alpha_bar(i - 1, T));
            CHECK(std::abs(s.beta[i] - ratio) < 1e-12);
        }
        CHECK(s.beta.back() == 0.999); // cos(pi/2) = 0 makes the last ratio clip
    }
}

TEST_CASE("schedule invariants hold across the tested step counts") {
    NoiseSchedule base = NoiseSchedule::cosine(100);
    for (std::size_t T : {5u, 10u, 20u, 50u, 100u}) {
        NoiseSchedule s = base.restride(T);
        CHECK(s.T == T);
        CHECK_NOTHROW(s.validate());
        CHECK(s.alpha_bar.front() > 0.99);
        CHECK(s.alpha_bar.back() < 0.01);
        for (std::size_t i = 0; i < s.T; ++i) {
        CHECK(s.beta[i] > 0.0);
            CHECK(s.beta[i] < 1.0);
        }
    }
    // Direct construction is already valid for the denser grids.
    for (std::size_t T : {20u, 50u, 100u}) CHECK_NOTHROW(NoiseSchedule::cosine(T).validate());
}

TEST_CASE("restride keeps endpoints and original time inputs") {
    NoiseSchedule base = NoiseSchedule::cosine(100);
    NoiseSchedule s = base.restride(10);
    CHECK(s.alpha_bar.front() == base.alpha_bar.front());
    CHECK(s.time_input.front() == 0.0);
    CHECK(s.time_input.back() == 99.0);
    CHECK(base.restride(100).T == 100);
    CHECK_THROWS_AS(base.restride(1), ConfigError);
    CHECK_THROWS_AS(base.restride(101), ConfigError);
}

TEST_CASE("T below 2 is a config error") {
    CHECK_THROWS_AS(NoiseSchedule::cosine(0), ConfigError);
    CHECK_THROWS_AS(NoiseSchedule::cosine(1), ConfigError);
}

TEST_CASE("posterior sigma vanishes at the first step") {
    NoiseSchedule s = NoiseSchedule::cosine(50);
    CHECK(s.posterior_sigma[0] == 0.0);
    for (std::size_t i = 1; i < s.T; ++i) CHECK(s.posterior_sigma[i] > 0.0);
}

TEST_CASE("posterior coefficients reproduce the formula") {
    NoiseSchedule s = NoiseSchedule::cosine(30);
    for (std::size_t i = 0; i < s.T; ++i) {
        PosteriorCoeffs c = posterior_coefficients(s, i);
        double ab = s.alpha_bar[i];
        double ab_prev = i == 0 ? 1.0 : s.alpha_bar[i - 1];
        CHECK(std::abs(c.coeff_tau_i - std::sqrt(s.alpha[i]) * (1.0 - ab_prev) / (1.0 - ab)) <
              1e-15);
        CHECK(std::abs(c.coeff_tau0 - std::sqrt(ab_prev) * s.beta[i] / (1.0 - ab)) < 1e-15);
        // The tau0-form mean must be consistent with the forward marginals:
        // feeding the noiseless tau_i = sqrt(ab) tau0 and tau0 itself must
        // land on sqrt(ab_prev) tau0.
        CHECK(std::abs(c.coeff_tau_i * std::sqrt(ab) + c.coeff_tau0 - std::sqrt(ab_prev)) < 1e-12);
    }
}

TEST_CASE("forward noise closed form") {
    NoiseSchedule s = NoiseSchedule::cosine(20);
    Tensor tau0 = Tensor::from_values({4}, {0.5, -0.25, 1.0, 0.0});
    Tensor zero = Tensor::zeros({4});
    std::size_t i = 7;
    Tensor noised = forward_noise(s, tau0, i, zero);
    double a = std::sqrt(s.alpha_bar[i]);
    for (std::size_t k = 0; k < 4; ++k) CHECK(noised[k] == a * tau0[k]);

    CHECK_THROWS_AS(forward_noise(s, tau0, 20, zero), ContractError);
    CHECK_THROWS_AS(forward_noise(s, tau0, 3, Tensor::zeros({3})), ShapeError);
}

TEST_CASE("forward noise reduces to the data in the no-noise limit") {
    // Hand-built schedule step with alpha_bar essentially 1.
    NoiseSchedule s;
    s.T = 2;
    s.beta = {1e-12, 0.5};
    s.alpha = {1.0 - 1e-12, 0.5};
    s.alpha_bar = {1.0 - 1e-12, (1.0 - 1e-12) * 0.5};
    s.posterior_sigma = {0.0, 0.1};
    s.time_input = {0.0, 1.0};

    Tensor tau0 = Tensor::from_values({3}, {1.0, -2.0, 3.0});
    Tensor z = Tensor::from_values({3}, {0.7, -0.3, 0.9});
    Tensor noised = forward_noise(s, tau0, 0, z);
    for (std::size_t k = 0; k < 3; ++k) CHECK(noised[k] == doctest::Approx(tau0[k]).epsilon(1e-5));
}

TEST_CASE("forward noise variance matches 1 - alpha_bar") {
    NoiseSchedule s = NoiseSchedule::cosine(20);
    std::size_t i = 10;
    Rng rng(555);
    Tensor tau0 = Tensor::from_values({4}, {0.2, -0.4, 0.6, -0.8});
    double a = std::sqrt(s.alpha_bar[i]);

    double acc = 0.0;
    std::size_t count = 0;
    for (int draw = 0; draw < 10000; ++draw) {
        Tensor z = Tensor::zeros({4});
        for (std::size_t k = 0; k < 4; ++k) z[k] = rng.normal();
        Tensor noised = forward_noise(s, tau0, i, z);
        for (std::size_t k = 0; k < 4; ++k) {
            double dev = noised[k] - a * tau0[k];
            acc += dev * dev;
            ++count;
        }
    }
    double variance = acc / static_cast<double>(count);
    CHECK(variance == doctest::Approx(1.0 - s.alpha_bar[i]).epsilon(0.05));
}
