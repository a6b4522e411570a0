#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "reapp/attention.hpp"

using namespace reapp;
using namespace reapp::testing;

namespace {

// Plain-loop recomputation of the boundary attention from raw parameter
// values; deliberately shares no code with the graph implementation.
std::vector<double> oracle_boundary_alpha(const ParameterSet<double>& ps,
                                          const std::vector<double>& c_prev,
                                          const std::vector<std::vector<double>>& H) {
    const auto& Wc = ps.at("attn.bnd.Wc").value;
    const auto& bc = ps.at("attn.bnd.bc").value;
    const auto& Wh = ps.at("attn.bnd.Wh").value;
    const auto& v = ps.at("attn.bnd.v").value;
    const std::size_t D = c_prev.size();

    std::vector<double> m(D);
    for (std::size_t r = 0; r < D; ++r) {
        double acc = bc(r);
        for (std::size_t k = 0; k < D; ++k) acc += Wc(r, k) * c_prev[k];
        m[r] = acc;
    }
    std::vector<double> beta(H.size());
    for (std::size_t i = 0; i < H.size(); ++i) {
        double score = 0;
        for (std::size_t r = 0; r < D; ++r) {
            double proj = 0;
            for (std::size_t k = 0; k < D; ++k) proj += Wh(r, k) * H[i][k];
            score += v(0, r) * std::tanh(m[r] + proj);
        }
        beta[i] = score;
    }
    double mx = beta[0];
    for (double b : beta) mx = std::max(mx, b);
    double z = 0;
    std::vector<double> alpha(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i) {
        alpha[i] = std::exp(beta[i] - mx);
        z += alpha[i];
    }
    for (double& a : alpha) a /= z;
    return alpha;
}

}  // namespace

TEST_CASE("span distance scaling") {
    SUBCASE("inside the span the scale is one") {
        for (int i = 2; i <= 4; ++i) {
            auto td = token_distance(2, 4, i, 10);
            CHECK(td.d == 0);
            CHECK(td.scale == 1.0);
        }
    }
    SUBCASE("outside it decays with the distance to the nearer boundary") {
        auto td = token_distance(10, 10, 9, 12);
        CHECK(td.d == 1);
        CHECK(td.scale == doctest::Approx(11.0 / 12).epsilon(1e-15));

        td = token_distance(2, 4, 0, 10);
        CHECK(td.d == 2);
        CHECK(td.scale == doctest::Approx(0.8));

        td = token_distance(2, 4, 9, 10);
        CHECK(td.d == 5);
        CHECK(td.scale == doctest::Approx(0.5));
    }
}

TEST_CASE("boundary attention") {
    auto model = tiny_model<double>(5);
    const std::size_t D = static_cast<std::size_t>(model.cfg.ctx_dim());
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1, 1);

    auto random_rows = [&](Graph<double>& g, std::size_t n) {
        std::vector<Var> H;
        for (std::size_t i = 0; i < n; ++i) {
            Tensor<double> t = Tensor<double>::vec(D);
            for (auto& x : t.data) x = dist(rng);
            H.push_back(g.constant(std::move(t)));
        }
        return H;
    };

    SUBCASE("a single token takes all the weight") {
        Graph<double> g(model.params);
        auto H = random_rows(g, 1);
        Var c = g.constant(Tensor<double>::vec(D));
        auto out = boundary_context(g, c, H, boundary_token_proj(g, H));
        CHECK(g.tape().val(out.weights)(0) == doctest::Approx(1.0));
    }
    SUBCASE("identical tokens split the weight evenly") {
        Graph<double> g(model.params);
        Tensor<double> t = Tensor<double>::vec(D);
        for (auto& x : t.data) x = dist(rng);
        std::vector<Var> H = {g.constant(t), g.constant(t)};
        Var c = g.constant(Tensor<double>::vec(D));
        auto out = boundary_context(g, c, H, boundary_token_proj(g, H));
        CHECK(g.tape().val(out.weights)(0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(g.tape().val(out.weights)(1) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("weights match a plain-loop oracle within 1e-10") {
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 1 + (rng() % 7);
            Graph<double> g(model.params);
            std::vector<std::vector<double>> Hraw(n, std::vector<double>(D));
            std::vector<double> craw(D);
            for (auto& x : craw) x = dist(rng);
            std::vector<Var> H;
            for (std::size_t i = 0; i < n; ++i) {
                Tensor<double> t = Tensor<double>::vec(D);
                for (std::size_t k = 0; k < D; ++k) {
                    Hraw[i][k] = dist(rng);
                    t(k) = Hraw[i][k];
                }
                H.push_back(g.constant(std::move(t)));
            }
            Tensor<double> ct = Tensor<double>::vec(D);
            for (std::size_t k = 0; k < D; ++k) ct(k) = craw[k];
            Var c = g.constant(std::move(ct));

            auto out = boundary_context(g, c, H, boundary_token_proj(g, H));
            auto expect = oracle_boundary_alpha(model.params, craw, Hraw);
            double ctx_err = 0;
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::fabs(g.tape().val(out.weights)(i) - expect[i]) <
                      1e-10);
            // Context is the alpha-weighted sum of the rows.
            for (std::size_t k = 0; k < D; ++k) {
                double want = 0;
                for (std::size_t i = 0; i < n; ++i)
                    want += expect[i] * Hraw[i][k];
                ctx_err = std::max(
                    ctx_err, std::fabs(g.tape().val(out.context)(k) - want));
            }
            CHECK(ctx_err < 1e-10);
        }
    }
}

TEST_CASE("polarity attention") {
    auto model = tiny_model<double>(5);
    const std::size_t D = static_cast<std::size_t>(model.cfg.ctx_dim());
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1, 1);

    SUBCASE("invalid spans are rejected") {
        Graph<double> g(model.params);
        std::vector<Var> H = {g.constant(Tensor<double>::vec(D)),
                              g.constant(Tensor<double>::vec(D))};
        Var c = g.constant(Tensor<double>::vec(D));
        CHECK_THROWS_AS(polarity_context(g, c, H, 1, 0), ValidationError);
        CHECK_THROWS_AS(polarity_context(g, c, H, 0, 2), ValidationError);
        CHECK_THROWS_AS(polarity_context(g, c, H, -1, 0), ValidationError);
    }
    SUBCASE("context equals the weighted sum of distance-scaled rows") {
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 2 + int(rng() % 6);
            const int s = int(rng() % std::size_t(n));
            const int e = s + int(rng() % std::size_t(n - s));
            Graph<double> g(model.params);
            std::vector<std::vector<double>> Hraw(
                static_cast<std::size_t>(n), std::vector<double>(D));
            std::vector<Var> H;
            for (int i = 0; i < n; ++i) {
                Tensor<double> t = Tensor<double>::vec(D);
                for (std::size_t k = 0; k < D; ++k) {
                    Hraw[std::size_t(i)][k] = dist(rng);
                    t(k) = Hraw[std::size_t(i)][k];
                }
                H.push_back(g.constant(std::move(t)));
            }
            Var c = g.constant(Tensor<double>::vec(D));
            auto out = polarity_context(g, c, H, s, e);
            const auto& alpha = g.tape().val(out.weights);

            double sum = 0;
            for (int i = 0; i < n; ++i) sum += alpha(std::size_t(i));
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

            for (std::size_t k = 0; k < D; ++k) {
                double want = 0;
                for (int i = 0; i < n; ++i)
                    want += alpha(std::size_t(i)) *
                            token_distance(s, e, i, n).scale *
                            Hraw[std::size_t(i)][k];
                CHECK(std::fabs(g.tape().val(out.context)(k) - want) < 1e-10);
            }
        }
    }
    SUBCASE("all-zero rows give an exactly zero context") {
        Graph<double> g(model.params);
        std::vector<Var> H = {g.constant(Tensor<double>::vec(D)),
                              g.constant(Tensor<double>::vec(D)),
                              g.constant(Tensor<double>::vec(D))};
        Var c = g.constant(Tensor<double>::vec(D));
        auto out = polarity_context(g, c, H, 0, 1);
        for (std::size_t k = 0; k < D; ++k)
            CHECK(g.tape().val(out.context)(k) == 0.0);
    }
    SUBCASE("distance scaling changes the result") {
        // Same rows, two different spans: the scaled contexts should differ
        // because the scales differ outside the span.
        Graph<double> g(model.params);
        std::vector<Var> H;
        for (int i = 0; i < 5; ++i) {
            Tensor<double> t = Tensor<double>::vec(D);
            for (auto& x : t.data) x = dist(rng);
            H.push_back(g.constant(std::move(t)));
        }
        Var c = g.constant(Tensor<double>::vec(D));
        auto a = polarity_context(g, c, H, 0, 0);
        auto b = polarity_context(g, c, H, 4, 4);
        bool differ = false;
        for (std::size_t k = 0; k < D; ++k)
            if (g.tape().val(a.context)(k) != g.tape().val(b.context)(k))
                differ = true;
        CHECK(differ);
    }
}
