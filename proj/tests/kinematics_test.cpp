#include <doctest.h>

#include <cmath>
#include <vector>

#include "kcgg/errors.hpp"
#include "kcgg/kinematics.hpp"
#include "kcgg/rng.hpp"
#include "support/fd_check.hpp"

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

ArmSpec three_link() {
    ArmSpec a;
    a.link_lengths = {0.55, 0.44, 0.44};
    a.base_position = {0.1, -0.2};
    a.joint_limits = {{-2.9, 2.9}, {-2.9, 2.9}, {-2.9, 2.9}};
    a.velocity_limits = {12.0, 12.0, 12.0};
    return a;
}

} // namespace

TEST_CASE("forward kinematics on the 2-link arm") {
    ArmSpec arm = two_link();
    std::vector<double> q{0.0, 0.0};
    Vec2 x = forward_kinematics(arm, q);
    CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-12));

    q = {M_PI / 2.0, 0.0};
    x = forward_kinematics(arm, q);
    CHECK(x[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-12));

    q = {0.0, M_PI / 2.0};
    x = forward_kinematics(arm, q);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wrong joint dimension raises a dimension error") {
    ArmSpec arm = two_link();
    std::vector<double> q{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(forward_kinematics(arm, q), ShapeError);
    CHECK_THROWS_AS(fk_jacobian(arm, q), ShapeError);
}

TEST_CASE("analytic jacobian at full extension") {
    ArmSpec arm = two_link();
    std::vector<double> q{0.0, 0.0};
    Tensor j = fk_jacobian(arm, q);
    CHECK(j.at(0, 0) == 0.0);
    CHECK(j.at(0, 1) == 0.0);
    CHECK(j.at(1, 0) == 2.0);
    CHECK(j.at(1, 1) == 1.0);
}

TEST_CASE("jacobian equals the autodiff gradient on random configurations") {
    ArmSpec arm = three_link();
    Rng rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> q(3);
        for (double& v : q) v = rng.uniform(-2.8, 2.8);
        Tensor jac = fk_jacobian(arm, q);

        for (int coord = 0; coord < 2; ++coord) {
            ad::Graph g;
            ad::Value qv = g.input(Tensor::from_values({3}, q));
            auto xy = forward_kinematics(arm, g, qv);
            g.backward(xy[static_cast<std::size_t>(coord)]);
            const Tensor& grad = g.grad(qv);
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(std::abs(grad[j] - jac.at(static_cast<std::size_t>(coord), j)) < 1e-10);
            }
        }
    }
}

TEST_CASE("jacobian matches finite differences") {
    ArmSpec arm = three_link();
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> q(3);
        for (double& v : q) v = rng.uniform(-2.5, 2.5);
        Tensor jac = fk_jacobian(arm, q);
        for (int coord = 0; coord < 2; ++coord) {
            auto f = [&](const std::vector<double>& qq) {
                return forward_kinematics(arm, qq)[static_cast<std::size_t>(coord)];
            };
            std::vector<double> analytic(3);
            for (std::size_t j = 0; j < 3; ++j) analytic[j] = jac.at(static_cast<std::size_t>(coord), j);
            auto res = testsupport::check_gradient(f, q, analytic, 1e-6, 1e-9, 1e-6);
            CHECK_MESSAGE(res.ok, res.describe());
        }
    }
}

TEST_CASE("reachability bound and 2-pi periodicity") {
    ArmSpec arm = three_link();
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> q(3);
        for (double& v : q) v = rng.uniform(-M_PI, M_PI);
        Vec2 x = forward_kinematics(arm, q);
        double r = std::hypot(x[0] - arm.base_position[0], x[1] - arm.base_position[1]);
        CHECK(r <= arm.reach() + 1e-12);

        std::size_t j = rng.uniform_index(3);
        std::vector<double> q2 = q;
        q2[j] += 2.0 * M_PI;
        Vec2 x2 = forward_kinematics(arm, q2);
        CHECK(std::abs(x2[0] - x[0]) < 1e-12);
        CHECK(std::abs(x2[1] - x[1]) < 1e-12);
    }
}

TEST_CASE("clamp_to_limits") {
    ArmSpec arm = two_link();
    ArmState inside{{0.5, -0.5}, {1.0, -1.0}};
    ArmState out = clamp_to_limits(arm, inside);
    CHECK(out.q == inside.q);
    CHECK(out.qdot == inside.qdot);

    ArmState over{{3.1, 0.0}, {0.0, -6.0}};
    out = clamp_to_limits(arm, over);
    CHECK(out.q[0] == 3.0);
    CHECK(out.qdot[1] == -5.0);
}

TEST_CASE("arm spec validation") {
    ArmSpec bad = two_link();
    bad.link_lengths[0] = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = two_link();
    bad.joint_limits[1] = {1.0, -1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    CHECK_NOTHROW(two_link().validate());
}
