#include <doctest.h>

#include <cmath>
#include <vector>

#include "kcgg/constraints.hpp"
#include "kcgg/errors.hpp"
#include "kcgg/rng.hpp"

using namespace kcgg;

namespace {

ArmSpec two_link() {
    ArmSpec a;
    a.link_lengths = {1.0, 1.0};
    a.base_position = {0.0, 0.0};
    a.joint_limits = {{-3.0, 3.0}, {-3.0, 3.0}};
    a.velocity_limits = {5.0, 5.0};
    return a;
}

/// Flat (num_states x 4) trajectory for the 2-link arm.
std::vector<double> flat_traj(std::size_t num_states, Rng* rng = nullptr) {
    std::vector<double> flat(num_states * 4, 0.0);
    if (rng != nullptr) {
        for (double& v : flat) v = rng->uniform(-1.5, 1.5);
    }
    return flat;
}

} // namespace

TEST_CASE("exact intersection has zero cost") {
    ArmSpec arm = two_link();
    std::vector<double> flat = flat_traj(4);
    // q = (0, 0) -> end effector (2, 0); target exactly there.
    StrikeConstraint c;
    c.t_start = 1;
    c.t_end = 2;
    c.targets[1] = {2.0, 0.0};
    c.targets[2] = {5.0, 5.0};
    CHECK(strike_cost_value(c, arm, flat, 4) == 0.0);
}

TEST_CASE("single-step window squared distance") {
    ArmSpec arm = two_link();
    std::vector<double> flat = flat_traj(3);
    StrikeConstraint c;
    c.t_start = 1;
    c.t_end = 1;
    c.targets[1] = {3.0, 0.0};
    c.weight = 1.0;
    CHECK(strike_cost_value(c, arm, flat, 4) == doctest::Approx(1.0).epsilon(1e-12));

    c.weight = 2.0;
    CHECK(strike_cost_value(c, arm, flat, 4) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gradient equals 2 lambda J^T (F(q) - b) at the argmin step") {
    ArmSpec arm = two_link();
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> flat = flat_traj(5, &rng);
        StrikeConstraint c;
        c.t_start = 1;
        c.t_end = 3;
        c.weight = rng.uniform(0.5, 2.0);
        for (std::size_t t = 1; t <= 3; ++t) c.targets[t] = {rng.uniform(-2, 2), rng.uniform(-2, 2)};

        std::size_t tstar = strike_argmin(c, arm, flat, 4);

        ad::Graph g;
        ad::Value traj = g.input(Tensor::from_values({flat.size()}, flat));
        ad::Value cost = strike_cost_node(c, arm, g, traj, 4);
        g.backward(cost);
        const Tensor& grad = g.grad(traj);

        std::vector<double> q{flat[tstar * 4], flat[tstar * 4 + 1]};
        Vec2 x = forward_kinematics(arm, q);
        Tensor jac = fk_jacobian(arm, q);
        const Vec2& b = c.targets.at(tstar);
        for (std::size_t j = 0; j < 2; ++j) {
            double expected = 2.0 * c.weight *
                              (jac.at(0, j) * (x[0] - b[0]) + jac.at(1, j) * (x[1] - b[1]));
            CHECK(std::abs(grad[tstar * 4 + j] - expected) < 1e-8);
        }
        // Zero outside the argmin timestep and on all velocity entries.
        for (std::size_t k = 0; k < grad.size(); ++k) {
            bool argmin_q = k == tstar * 4 || k == tstar * 4 + 1;
            if (!argmin_q) CHECK(grad[k] == 0.0);
        }
    }
}

TEST_CASE("node and forward cost agree") {
    ArmSpec arm = two_link();
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> flat = flat_traj(6, &rng);
        StrikeConstraint c;
        c.t_start = 0;
        c.t_end = 5;
        c.weight = 1.3;
        for (std::size_t t = 0; t <= 5; ++t) c.targets[t] = {rng.uniform(-2, 2), rng.uniform(-2, 2)};

        ad::Graph g;
        ad::Value traj = g.input(Tensor::from_values({flat.size()}, flat));
        double node_value = strike_cost_node(c, arm, g, traj, 4).scalar();
        double fwd = strike_cost_value(c, arm, flat, 4);
        CHECK(std::abs(node_value - fwd) < 1e-12);
        CHECK(fwd >= 0.0);
    }
}

TEST_CASE("argmin ties break to the smaller timestep") {
    ArmSpec arm = two_link();
    std::vector<double> flat = flat_traj(4); // all states identical -> identical distances
    StrikeConstraint c;
    c.t_start = 1;
    c.t_end = 3;
    c.targets[1] = {1.5, 0.5};
    c.targets[2] = {1.5, 0.5};
    c.targets[3] = {1.5, 0.5};
    CHECK(strike_argmin(c, arm, flat, 4) == 1);
}

TEST_CASE("window outside the horizon is rejected") {
    ArmSpec arm = two_link();
    std::vector<double> flat = flat_traj(3);
    StrikeConstraint c;
    c.t_start = 2;
    c.t_end = 4;
    for (std::size_t t = 2; t <= 4; ++t) c.targets[t] = {1.0, 1.0};
    CHECK_THROWS_AS(strike_cost_value(c, arm, flat, 4), ConfigError);

    StrikeConstraint missing;
    missing.t_start = 0;
    missing.t_end = 1;
    missing.targets[0] = {1.0, 1.0};
    CHECK_THROWS_AS(strike_cost_value(missing, arm, flat, 4), ConfigError);
}
