#include <doctest.h>

#include <cmath>
#include <vector>

#include "kcgg/autodiff.hpp"
#include "kcgg/errors.hpp"
#include "kcgg/rng.hpp"
#include "kcgg/tensor.hpp"
#include "support/fd_check.hpp"

using namespace kcgg;
using testsupport::check_gradient;

TEST_CASE("tensor rejects non-finite external input") {
    CHECK_THROWS_AS(Tensor::from_values({2}, {1.0, std::nan("")}), ShapeError);
    CHECK_THROWS_AS(Tensor::from_values({2}, {1.0, INFINITY}), ShapeError);
    CHECK_THROWS_AS(Tensor::from_values({3}, {1.0, 2.0}), ShapeError);
}

TEST_CASE("elementwise ops match their definitions") {
    ad::Graph g;
    ad::Value a = g.input(Tensor::from_values({2}, {1.0, 2.0}));
    ad::Value b = g.input(Tensor::from_values({2}, {3.0, 4.0}));
    ad::Value s = ad::add(a, b);
    CHECK(s.tensor()[0] == 4.0);
    CHECK(s.tensor()[1] == 6.0);

    ad::Value p = ad::mul(a, b);
    CHECK(p.tensor()[0] == 3.0);
    CHECK(p.tensor()[1] == 8.0);

    ad::Value d = ad::sub(b, a);
    CHECK(d.tensor()[0] == 2.0);
    CHECK(d.tensor()[1] == 2.0);
}

TEST_CASE("matmul identity case") {
    ad::Graph g;
    ad::Value eye = g.input(Tensor::from_values({2, 2}, {1.0, 0.0, 0.0, 1.0}));
    ad::Value m = g.input(Tensor::from_values({2, 2}, {5.0, 6.0, 7.0, 8.0}));
    ad::Value out = ad::matmul(eye, m);
    CHECK(out.tensor()[0] == 5.0);
    CHECK(out.tensor()[1] == 6.0);
    CHECK(out.tensor()[2] == 7.0);
    CHECK(out.tensor()[3] == 8.0);
}

TEST_CASE("shape mismatch names both shapes") {
    ad::Graph g;
    ad::Value a = g.input(Tensor::from_values({2}, {1.0, 2.0}));
    ad::Value b = g.input(Tensor::from_values({3}, {1.0, 2.0, 3.0}));
    try {
        ad::add(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        std::string msg = e.what();
        CHECK(msg.find("[2]") != std::string::npos);
        CHECK(msg.find("[3]") != std::string::npos);
    }
}

TEST_CASE("d(x^2)/dx = 2x via sum(mul(x, x))") {
    ad::Graph g;
    ad::Value x = g.input(Tensor::from_values({1}, {3.0}));
    ad::Value y = ad::sum(ad::mul(x, x));
    g.backward(y);
    CHECK(g.grad(x)[0] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("fan-out accumulates: y = x + x") {
    ad::Graph g;
    ad::Value x = g.input(Tensor::from_values({1}, {1.0}));
    ad::Value y = ad::sum(ad::add(x, x));
    g.backward(y);
    CHECK(g.grad(x)[0] == 2.0);
}

TEST_CASE("constant node gets a zero gradient") {
    ad::Graph g;
    ad::Value c = g.constant(Tensor::from_values({3}, {1.0, 2.0, 3.0}));
    ad::Value x = g.input(Tensor::from_values({1}, {2.0}));
    g.backward(ad::sum(ad::mul(x, x)));
    const Tensor& gc = g.grad(c);
    CHECK(gc.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(gc[i] == 0.0);
}

TEST_CASE("backward contract violations") {
    ad::Graph g;
    ad::Value x = g.input(Tensor::from_values({2}, {1.0, 2.0}));
    CHECK_THROWS_AS(g.backward(x), ContractError); // non-scalar root

    ad::Graph g2;
    ad::Value x2 = g2.input(Tensor::from_values({2}, {1.0, 2.0}));
    ad::Value y2 = ad::sum(x2);
    g2.backward(y2);
    CHECK_THROWS_AS(g2.backward(y2), ContractError); // graphs are single-use
}

TEST_CASE("backward is deterministic across identical graphs") {
    auto run = [] {
        ad::Graph g;
        ad::Value x = g.input(Tensor::from_values({3}, {0.3, -1.2, 2.5}));
        ad::Value w = g.input(Tensor::from_values({3, 3},
                                                  {0.1, -0.2, 0.3, 0.5, 0.7, -0.9, 1.1, 0.2, -0.4}));
        ad::Value y = ad::sum(ad::silu(ad::matmul(w, x)));
        g.backward(y);
        std::vector<double> out;
        for (std::size_t i = 0; i < 3; ++i) out.push_back(g.grad(x)[i]);
        for (std::size_t i = 0; i < 9; ++i) out.push_back(g.grad(w)[i]);
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("silu values and gradient") {
    ad::Graph g;
    ad::Value x = g.input(Tensor::from_values({2}, {0.0, 10.0}));
    ad::Value y = ad::silu(x);
    CHECK(y.tensor()[0] == 0.0);
    CHECK(y.tensor()[1] == doctest::Approx(10.0).epsilon(1e-3));

    // Gradient at u = 0.5 against central differences, rel 1e-5.
    ad::Graph g2;
    ad::Value u = g2.input(Tensor::from_values({1}, {0.5}));
    ad::Value s = ad::sum(ad::silu(u));
    g2.backward(s);
    double analytic = g2.grad(u)[0];
    auto f = [](const std::vector<double>& v) { return v[0] / (1.0 + std::exp(-v[0])); };
    auto res = check_gradient(f, {0.5}, {analytic}, 1e-5, 1e-12, 1e-5);
    CHECK_MESSAGE(res.ok, res.describe());
}

namespace {

/// Rebuilds a 2-hidden-layer MLP scalar output from a flat parameter+input
/// vector; used as the plain forward function for the FD oracle.
double mlp_forward(const std::vector<double>& theta, std::size_t in_dim, std::size_t width) {
    std::size_t off = 0;
    auto take = [&](std::size_t n) {
        const double* p = theta.data() + off;
        off += n;
        return p;
    };
    const double* x = take(in_dim);
    const double* w1 = take(in_dim * width);
    const double* b1 = take(width);
    const double* w2 = take(width * width);
    const double* b2 = take(width);
    const double* w3 = take(width);

    auto silu = [](double u) { return u / (1.0 + std::exp(-u)); };
    std::vector<double> h1(width), h2(width);
    for (std::size_t j = 0; j < width; ++j) {
        double acc = b1[j];
        for (std::size_t i = 0; i < in_dim; ++i) acc += x[i] * w1[i * width + j];
        h1[j] = silu(acc);
    }
    for (std::size_t j = 0; j < width; ++j) {
        double acc = b2[j];
        for (std::size_t i = 0; i < width; ++i) acc += h1[i] * w2[i * width + j];
        h2[j] = silu(acc);
    }
    double out = 0.0;
    for (std::size_t i = 0; i < width; ++i) out += h2[i] * w3[i];
    return out;
}

} // namespace

TEST_CASE("full MLP gradients match finite differences") {
    const std::size_t in_dim = 4;
    const std::size_t width = 16;
    Rng rng(42);
    std::vector<double> theta(in_dim + in_dim * width + width + width * width + width + width);
    for (double& v : theta) v = 0.4 * rng.normal();

    // Analytic gradients through the graph.
    ad::Graph g;
    std::size_t off = 0;
    auto slice = [&](std::vector<std::size_t> shape) {
        std::size_t n = 1;
        for (auto d : shape) n *= d;
        std::vector<double> vals(theta.begin() + static_cast<long>(off),
                                 theta.begin() + static_cast<long>(off + n));
        off += n;
        return g.input(Tensor::from_values(std::move(shape), std::move(vals)));
    };
    ad::Value x = slice({1, in_dim});
    ad::Value w1 = slice({in_dim, width});
    ad::Value b1 = slice({width});
    ad::Value w2 = slice({width, width});
    ad::Value b2 = slice({width});
    ad::Value w3 = slice({width});
    ad::Value h1 = ad::silu(ad::add_rowvec(ad::matmul(x, w1), b1));
    ad::Value h2 = ad::silu(ad::add_rowvec(ad::matmul(h1, w2), b2));
    ad::Value y = ad::sum(ad::mul(ad::row(h2, 0), w3));
    g.backward(y);

    std::vector<double> analytic;
    for (ad::Value v : {x, w1, b1, w2, b2, w3}) {
        const Tensor& gr = g.grad(v);
        analytic.insert(analytic.end(), gr.data(), gr.data() + gr.size());
    }

    auto f = [&](const std::vector<double>& t) { return mlp_forward(t, in_dim, width); };
    auto res = check_gradient(f, theta, analytic, 1e-5, 1e-9, 1e-4);
    CHECK_MESSAGE(res.ok, res.describe());
}

namespace {

/// One expression touching the whole op set; leaves are (a 2x3, b 3x2,
/// c 2-vec, d 3-vec) packed into a flat parameter vector.
struct CompositeExpr {
    ad::Graph g;
    std::vector<ad::Value> leaves;
    ad::Value total;

    explicit CompositeExpr(const std::vector<double>& t) {
        std::size_t off = 0;
        auto take = [&](std::vector<std::size_t> shape) {
            std::size_t n = 1;
            for (auto dd : shape) n *= dd;
            std::vector<double> v(t.begin() + static_cast<long>(off),
                                  t.begin() + static_cast<long>(off + n));
            off += n;
            ad::Value leaf = g.input(Tensor::from_values(std::move(shape), std::move(v)));
            leaves.push_back(leaf);
            return leaf;
        };
        ad::Value a = take({2, 3});
        ad::Value b = take({3, 2});
        ad::Value c = take({2});
        ad::Value d = take({3});

        ad::Value m = ad::matmul(a, b);                              // 2x2
        ad::Value mm = ad::add_rowvec(m, c);                         // rowvec add
        ad::Value cc = ad::concat_cols(mm, ad::gather_rows(m, {1, 0}));
        ad::Value r = ad::row(cc, 0);
        ad::Value seg = ad::segment(r, 1, 2);
        ad::Value tri = ad::add(ad::sin(seg), ad::cos(ad::scale(seg, 0.5)));
        ad::Value mv = ad::matmul(a, d);                             // matrix * vector
        ad::Value mixed = ad::mul(tri, mv);
        ad::Value e = ad::element(mixed, 0);
        total = ad::add(ad::sum(ad::silu(mixed)), ad::sub(e, ad::sum(ad::mul(c, c))));
    }

    static constexpr std::size_t param_count() { return 2 * 3 + 3 * 2 + 2 + 3; }
};

} // namespace

TEST_CASE("every op passes the finite-difference property") {
    Rng rng(7);
    auto forward = [](const std::vector<double>& t) { return CompositeExpr(t).total.scalar(); };
    for (int probe = 0; probe < 25; ++probe) {
        std::vector<double> vals(CompositeExpr::param_count());
        for (double& v : vals) v = rng.normal();

        CompositeExpr expr(vals);
        expr.g.backward(expr.total);
        std::vector<double> analytic;
        for (ad::Value v : expr.leaves) {
            const Tensor& gr = expr.g.grad(v);
            analytic.insert(analytic.end(), gr.data(), gr.data() + gr.size());
        }
        auto res = check_gradient(forward, vals, analytic);
        CHECK_MESSAGE(res.ok, res.describe());
    }
}

TEST_CASE("scalar broadcast in elementwise ops") {
    ad::Graph g;
    ad::Value k = g.input(Tensor::scalar(2.0));
    ad::Value v = g.input(Tensor::from_values({3}, {1.0, 2.0, 3.0}));
    ad::Value y = ad::sum(ad::mul(k, v));
    CHECK(y.scalar() == 12.0);
    g.backward(y);
    CHECK(g.grad(k)[0] == 6.0); // sum of v
    CHECK(g.grad(v)[0] == 2.0);
}
