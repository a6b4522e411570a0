#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reapp/params.hpp"

using namespace reapp;

TEST_CASE("parameter set bookkeeping") {
    ParameterSet<double> ps;
    ps.add("a", Tensor<double>::from({1, 2, 3}));
    ps.add("b", Tensor<double>::from({4, 5}));
    CHECK(ps.scalar_count() == 5);
    CHECK_THROWS_AS(ps.add("a", Tensor<double>::vec(1)), ValidationError);
    CHECK_THROWS_AS(ps.at("missing"), ValidationError);

    ps.at("a").grad(0) = 3;
    ps.at("b").grad(1) = 4;
    CHECK(ps.grad_norm() == doctest::Approx(5.0).epsilon(1e-12));

    SUBCASE("clip rescales to the target norm") {
        ps.clip_grads(1.0);
        CHECK(ps.grad_norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ps.at("a").grad(0) == doctest::Approx(0.6));
        CHECK(ps.at("b").grad(1) == doctest::Approx(0.8));
    }
    SUBCASE("clip below the threshold is a no-op") {
        ps.clip_grads(10.0);
        CHECK(ps.at("a").grad(0) == 3.0);
    }
    SUBCASE("zero_grads clears everything") {
        ps.zero_grads();
        CHECK(ps.grad_norm() == 0.0);
    }
}

TEST_CASE("adam first step moves by roughly the learning rate") {
    ParameterSet<double> ps;
    ps.add("w", Tensor<double>::from({1.0, -2.0, 0.5}));
    ps.at("w").grad = Tensor<double>::from({0.3, -0.7, 10.0});

    AdamState<double> opt;
    opt.lr = 1e-3;
    opt.update(ps);

    // With bias correction the first step is lr * g/(|g| + eps') per scalar,
    // i.e. lr * sign(g) up to the epsilon term.
    CHECK(ps.at("w").value(0) == doctest::Approx(1.0 - 1e-3).epsilon(1e-6));
    CHECK(ps.at("w").value(1) == doctest::Approx(-2.0 + 1e-3).epsilon(1e-6));
    CHECK(ps.at("w").value(2) == doctest::Approx(0.5 - 1e-3).epsilon(1e-6));
}

TEST_CASE("adam matches a hand-rolled scalar recurrence over several steps") {
    ParameterSet<double> ps;
    ps.add("w", Tensor<double>::from({0.7}));

    AdamState<double> opt;
    opt.lr = 0.01;

    // Independent reference implementation of the same recurrence.
    double theta = 0.7, m = 0, v = 0;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    for (int t = 1; t <= 5; ++t) {
        const double g = std::sin(double(t));  // arbitrary but deterministic
        m = b1 * m + (1 - b1) * g;
        v = b2 * v + (1 - b2) * g * g;
        const double mhat = m / (1 - std::pow(b1, t));
        const double vhat = v / (1 - std::pow(b2, t));
        theta -= 0.01 * mhat / (std::sqrt(vhat) + eps);

        ps.at("w").grad(0) = g;
        opt.update(ps);
        CHECK(ps.at("w").value(0) == doctest::Approx(theta).epsilon(1e-12));
    }
}

TEST_CASE("adam with zero gradients leaves parameters unchanged") {
    ParameterSet<double> ps;
    ps.add("w", Tensor<double>::from({3.0, -1.0}));
    AdamState<double> opt;
    opt.update(ps);
    opt.update(ps);
    CHECK(ps.at("w").value(0) == 3.0);
    CHECK(ps.at("w").value(1) == -1.0);
}

TEST_CASE("glorot bounds scale with fan sizes") {
    std::mt19937_64 rng(1);
    Tensor<double> t = Tensor<double>::mat(50, 50);
    init_glorot(t, 50, 50, rng);
    const double bound = std::sqrt(6.0 / 100.0);
    double mx = 0;
    for (double v : t.data) mx = std::max(mx, std::fabs(v));
    CHECK(mx <= bound);
    CHECK(mx > 0.5 * bound);  // the fill actually uses the range
}

TEST_CASE("graph binds each parameter once and accumulates gradients") {
    ParameterSet<double> ps;
    ps.add("w", Tensor<double>::from({2.0, 3.0}));

    Graph<double> g(ps);
    Var w1 = g.p("w");
    Var w2 = g.p("w");
    CHECK(w1.i == w2.i);

    // loss = sum(w * w) => dloss/dw = 2w
    Var prod = g.tape().mul(w1, w2);
    std::vector<Var> comps = {g.tape().slice(prod, 0, 1),
                              g.tape().slice(prod, 1, 1)};
    Var loss = g.tape().sum_scalars(comps);
    g.backward(loss);
    CHECK(ps.at("w").grad(0) == doctest::Approx(4.0));
    CHECK(ps.at("w").grad(1) == doctest::Approx(6.0));

    // A second graph adds on top of the existing accumulation.
    Graph<double> g2(ps);
    Var w = g2.p("w");
    Var loss2 = g2.tape().slice(w, 0, 1);
    g2.backward(loss2);
    CHECK(ps.at("w").grad(0) == doctest::Approx(5.0));
}

TEST_CASE("cast converts values and resets gradients") {
    ParameterSet<double> ps;
    ps.add("w", Tensor<double>::from({1.5, -2.25}));
    ps.at("w").grad(0) = 9;
    auto fs = ps.cast<float>();
    CHECK(fs.at("w").value(0) == 1.5f);
    CHECK(fs.at("w").value(1) == -2.25f);
    CHECK(fs.at("w").grad(0) == 0.0f);
}
