#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reapp/corpus.hpp"

namespace reapp {

struct Prf {
    double precision = 0, recall = 0, f1 = 0;
    std::size_t matched = 0, predicted = 0, gold = 0;
};

struct EvalReport {
    Prf triplet;
    Prf aspect;
    // Fraction of exactly-matched spans with the right polarity; empty when
    // no spans match.
    std::optional<double> polarity_accuracy;
    std::size_t polarity_matched_spans = 0;

    std::string to_text() const;
    std::string to_json() const;
};

using TripletSets = std::vector<std::vector<Triplet>>;

// Exact-match micro-averaged scores; predictions and gold aligned by
// sentence.
Prf triplet_prf(const TripletSets& predictions, const TripletSets& gold);
Prf aspect_prf(const TripletSets& predictions, const TripletSets& gold);
std::optional<double> polarity_accuracy(const TripletSets& predictions,
                                        const TripletSets& gold);

EvalReport evaluate(const TripletSets& predictions, const TripletSets& gold);

}  // namespace reapp
