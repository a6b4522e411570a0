#include "reapp/eval.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace reapp {

namespace {

void check_aligned(const TripletSets& pred, const TripletSets& gold) {
    if (pred.size() != gold.size())
        throw ValidationError("evaluation: prediction/gold corpora misaligned");
}

Prf finish(std::size_t matched, std::size_t predicted, std::size_t gold) {
    Prf r;
    r.matched = matched;
    r.predicted = predicted;
    r.gold = gold;
    r.precision = predicted ? double(matched) / double(predicted) : 0.0;
    r.recall = gold ? double(matched) / double(gold) : 0.0;
    r.f1 = (r.precision + r.recall) > 0
               ? 2 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

// Counts one-to-one matches under the given equality.
template <typename Eq>
std::size_t count_matches(const std::vector<Triplet>& pred,
                          const std::vector<Triplet>& gold, Eq eq) {
    std::vector<char> used(gold.size(), 0);
    std::size_t m = 0;
    for (const Triplet& p : pred) {
        for (std::size_t j = 0; j < gold.size(); ++j) {
            if (!used[j] && eq(p, gold[j])) {
                used[j] = 1;
                ++m;
                break;
            }
        }
    }
    return m;
}

}  // namespace

Prf triplet_prf(const TripletSets& predictions, const TripletSets& gold) {
    check_aligned(predictions, gold);
    std::size_t m = 0, np = 0, ng = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        np += predictions[i].size();
        ng += gold[i].size();
        m += count_matches(predictions[i], gold[i],
                           [](const Triplet& a, const Triplet& b) {
                               return a == b;
                           });
    }
    return finish(m, np, ng);
}

Prf aspect_prf(const TripletSets& predictions, const TripletSets& gold) {
    check_aligned(predictions, gold);
    std::size_t m = 0, np = 0, ng = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        np += predictions[i].size();
        ng += gold[i].size();
        m += count_matches(predictions[i], gold[i],
                           [](const Triplet& a, const Triplet& b) {
                               return a.s == b.s && a.e == b.e;
                           });
    }
    return finish(m, np, ng);
}

std::optional<double> polarity_accuracy(const TripletSets& predictions,
                                        const TripletSets& gold) {
    check_aligned(predictions, gold);
    std::size_t spans = 0, correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        for (const Triplet& p : predictions[i]) {
            auto it = std::find_if(gold[i].begin(), gold[i].end(),
                                   [&](const Triplet& g) {
                                       return g.s == p.s && g.e == p.e;
                                   });
            if (it != gold[i].end()) {
                ++spans;
                if (it->r == p.r) ++correct;
            }
        }
    }
    if (spans == 0) return std::nullopt;
    return double(correct) / double(spans);
}

EvalReport evaluate(const TripletSets& predictions, const TripletSets& gold) {
    EvalReport r;
    r.triplet = triplet_prf(predictions, gold);
    r.aspect = aspect_prf(predictions, gold);
    r.polarity_accuracy = polarity_accuracy(predictions, gold);
    std::size_t spans = 0;
    for (std::size_t i = 0; i < gold.size(); ++i)
        for (const Triplet& p : predictions[i])
            for (const Triplet& g : gold[i])
                if (g.s == p.s && g.e == p.e) {
                    ++spans;
                    break;
                }
    r.polarity_matched_spans = spans;
    return r;
}

std::string EvalReport::to_text() const {
    std::ostringstream os;
    os << "triplet.precision " << triplet.precision << "\n"
       << "triplet.recall " << triplet.recall << "\n"
       << "triplet.f1 " << triplet.f1 << "\n"
       << "aspect.precision " << aspect.precision << "\n"
       << "aspect.recall " << aspect.recall << "\n"
       << "aspect.f1 " << aspect.f1 << "\n";
    if (polarity_accuracy)
        os << "polarity.accuracy " << *polarity_accuracy << "\n";
    else
        os << "polarity.accuracy n/a\n";
    os << "counts.triplet_matched " << triplet.matched << "\n"
       << "counts.predicted " << triplet.predicted << "\n"
       << "counts.gold " << triplet.gold << "\n";
    return os.str();
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["triplet"] = {{"precision", triplet.precision},
                    {"recall", triplet.recall},
                    {"f1", triplet.f1}};
    j["aspect"] = {{"precision", aspect.precision},
                   {"recall", aspect.recall},
                   {"f1", aspect.f1}};
    if (polarity_accuracy)
        j["polarity"] = {{"accuracy", *polarity_accuracy},
                         {"matched_spans", polarity_matched_spans}};
    else
        j["polarity"] = {{"accuracy", nullptr},
                         {"matched_spans", polarity_matched_spans}};
    j["counts"] = {{"matched", triplet.matched},
                   {"predicted", triplet.predicted},
                   {"gold", triplet.gold}};
    return j.dump();
}

}  // namespace reapp
