#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "reapp/eval.hpp"

using namespace reapp;

namespace {

// Exhaustive maximum-bipartite matching by permutation; exponential but
// exact, usable as an oracle for the small per-sentence triplet sets.
template <typename Eq>
std::size_t oracle_max_matching(std::vector<Triplet> pred,
                                const std::vector<Triplet>& gold, Eq eq) {
    std::vector<std::size_t> idx(pred.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end());
    std::size_t best = 0;
    do {
        std::vector<char> used(gold.size(), 0);
        std::size_t m = 0;
        for (std::size_t i : idx) {
            for (std::size_t j = 0; j < gold.size(); ++j)
                if (!used[j] && eq(pred[i], gold[j])) {
                    used[j] = 1;
                    ++m;
                    break;
                }
        }
        best = std::max(best, m);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

std::vector<Triplet> random_triplets(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(0, 3), sdist(0, 5), len(0, 2),
        pol(0, 2);
    std::vector<Triplet> out;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
        const int s = sdist(rng);
        out.push_back({s, s + len(rng), static_cast<Polarity>(pol(rng))});
    }
    return out;
}

}  // namespace

TEST_CASE("hand-checked precision, recall, and f1") {
    // Two predictions, one exactly right; two gold triplets.
    TripletSets pred = {{{0, 1, Polarity::Pos}, {3, 3, Polarity::Neg}}};
    TripletSets gold = {{{0, 1, Polarity::Pos}, {5, 6, Polarity::Neu}}};
    auto r = triplet_prf(pred, gold);
    CHECK(r.precision == doctest::Approx(0.5));
    CHECK(r.recall == doctest::Approx(0.5));
    CHECK(r.f1 == doctest::Approx(0.5));

    // One prediction matching one of two gold: P = 1, R = 0.5, F1 = 2/3.
    pred = {{{0, 1, Polarity::Pos}}};
    r = triplet_prf(pred, gold);
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall == doctest::Approx(0.5));
    CHECK(r.f1 == doctest::Approx(2.0 / 3));
}

TEST_CASE("a triplet match requires the exact span and polarity") {
    TripletSets gold = {{{2, 4, Polarity::Pos}}};
    CHECK(triplet_prf({{{2, 4, Polarity::Neg}}}, gold).matched == 0);
    CHECK(triplet_prf({{{2, 3, Polarity::Pos}}}, gold).matched == 0);
    CHECK(triplet_prf({{{3, 4, Polarity::Pos}}}, gold).matched == 0);
    CHECK(triplet_prf({{{2, 4, Polarity::Pos}}}, gold).matched == 1);

    // The span-only score accepts the wrong polarity.
    CHECK(aspect_prf({{{2, 4, Polarity::Neg}}}, gold).matched == 1);
}

TEST_CASE("empty corpora and empty sentences") {
    CHECK(triplet_prf({}, {}).f1 == 0.0);
    auto r = triplet_prf({{}}, {{}});
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
    // Predicting nothing against a non-empty gold: zero recall, and the
    // precision convention is 0 rather than a division by zero.
    r = triplet_prf({{}}, {{{0, 0, Polarity::Pos}}});
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
}

TEST_CASE("misaligned corpora are rejected") {
    CHECK_THROWS_AS(triplet_prf({{}}, {{}, {}}), ValidationError);
    CHECK_THROWS_AS(aspect_prf({{}, {}}, {{}}), ValidationError);
    CHECK_THROWS_AS(polarity_accuracy({{}}, {}), ValidationError);
}

TEST_CASE("matching is one-to-one: duplicates only count once") {
    TripletSets gold = {{{1, 1, Polarity::Pos}}};
    TripletSets pred = {{{1, 1, Polarity::Pos}, {1, 1, Polarity::Pos}}};
    auto r = triplet_prf(pred, gold);
    CHECK(r.matched == 1);
    CHECK(r.precision == doctest::Approx(0.5));
    CHECK(r.recall == doctest::Approx(1.0));
}

TEST_CASE("matched counts agree with an exhaustive oracle") {
    std::mt19937_64 rng(123);
    auto triplet_eq = [](const Triplet& a, const Triplet& b) { return a == b; };
    auto span_eq = [](const Triplet& a, const Triplet& b) {
        return a.s == b.s && a.e == b.e;
    };
    for (int corpus = 0; corpus < 1000; ++corpus) {
        TripletSets pred, gold;
        std::size_t want_t = 0, want_a = 0, np = 0, ng = 0;
        const int sentences = 1 + int(rng() % 4);
        for (int s = 0; s < sentences; ++s) {
            pred.push_back(random_triplets(rng));
            gold.push_back(random_triplets(rng));
            want_t += oracle_max_matching(pred.back(), gold.back(), triplet_eq);
            want_a += oracle_max_matching(pred.back(), gold.back(), span_eq);
            np += pred.back().size();
            ng += gold.back().size();
        }
        const auto rt = triplet_prf(pred, gold);
        const auto ra = aspect_prf(pred, gold);
        CHECK(rt.matched == want_t);
        CHECK(ra.matched == want_a);
        CHECK(rt.predicted == np);
        CHECK(rt.gold == ng);
        // Ignoring polarity can only help.
        CHECK(ra.matched >= rt.matched);
        CHECK(ra.f1 >= rt.f1);
    }
}

TEST_CASE("scores ignore triplet order within a sentence") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        TripletSets pred = {random_triplets(rng)};
        TripletSets gold = {random_triplets(rng)};
        TripletSets shuffled = pred;
        std::shuffle(shuffled[0].begin(), shuffled[0].end(), rng);
        CHECK(triplet_prf(pred, gold).matched ==
              triplet_prf(shuffled, gold).matched);
    }
}

TEST_CASE("polarity accuracy over exactly matched spans") {
    TripletSets gold = {{{0, 1, Polarity::Pos}, {3, 3, Polarity::Neg}}};
    SUBCASE("no matched spans yields no value") {
        auto acc = polarity_accuracy({{{5, 5, Polarity::Pos}}}, gold);
        CHECK_FALSE(acc.has_value());
        auto rep = evaluate({{{5, 5, Polarity::Pos}}}, gold);
        CHECK(rep.polarity_matched_spans == 0);
        CHECK(rep.to_text().find("polarity.accuracy n/a") != std::string::npos);
    }
    SUBCASE("half of the matched spans carry the right label") {
        TripletSets pred = {{{0, 1, Polarity::Pos}, {3, 3, Polarity::Neu}}};
        auto acc = polarity_accuracy(pred, gold);
        REQUIRE(acc.has_value());
        CHECK(*acc == doctest::Approx(0.5));
        auto rep = evaluate(pred, gold);
        CHECK(rep.polarity_matched_spans == 2);
    }
}

TEST_CASE("report serialization carries the headline numbers") {
    TripletSets pred = {{{0, 1, Polarity::Pos}}};
    TripletSets gold = {{{0, 1, Polarity::Pos}, {5, 6, Polarity::Neu}}};
    auto rep = evaluate(pred, gold);
    const std::string text = rep.to_text();
    CHECK(text.find("triplet.precision 1") != std::string::npos);
    CHECK(text.find("triplet.recall 0.5") != std::string::npos);
    const std::string js = rep.to_json();
    CHECK(js.find("\"f1\"") != std::string::npos);
    CHECK(js.find("\"precision\":1.0") != std::string::npos);
}
