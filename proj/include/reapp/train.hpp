#pragma once

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "reapp/decoder.hpp"
#include "reapp/eval.hpp"

namespace reapp {

struct TrainConfig {
    double lr = 1e-3;
    int batch_size = 32;
    double dropout = 0.5;
    int max_epochs = 100;
    int patience = 10;
    std::uint64_t seed = 42;
    double clip_norm = 5.0;
    int max_aspects = 8;

    void validate() const {
        if (lr <= 0) throw ValidationError("train: lr must be positive");
        if (batch_size < 1)
            throw ValidationError("train: batch_size must be >= 1");
        if (dropout < 0 || dropout >= 1)
            throw ValidationError("train: dropout must be in [0, 1)");
        if (max_epochs < 1)
            throw ValidationError("train: max_epochs must be >= 1");
        if (patience < 0 || patience > max_epochs)
            throw ValidationError("train: need 0 <= patience <= max_epochs");
        if (clip_norm <= 0)
            throw ValidationError("train: clip_norm must be positive");
        if (max_aspects < 1)
            throw ValidationError("train: max_aspects must be >= 1");
    }
};

struct PreparedExample {
    IndexedExample ix;
    TargetSequence gold;
};

inline std::vector<PreparedExample> prepare(
    const std::vector<AnnotatedExample>& examples, const Vocabulary& vocab) {
    std::vector<PreparedExample> out;
    out.reserve(examples.size());
    for (const auto& ex : examples)
        out.push_back({index_example(ex, vocab), linearize_targets(ex)});
    return out;
}

// Mean negative log-likelihood of the gold argument at each step.
template <typename T>
Var sequence_nll(Graph<T>& g, const std::vector<Var>& dists,
                 const TargetSequence& targets, int n) {
    if (dists.size() != targets.size())
        throw ValidationError("sequence_nll: step count mismatch");
    auto& tp = g.tape();
    std::vector<Var> terms;
    terms.reserve(dists.size());
    for (std::size_t t = 0; t < dists.size(); ++t) {
        const StepKind kind = step_kind(static_cast<int>(t) + 1);
        terms.push_back(
            tp.neg_log_pick(dists[t], arg_index(targets[t], kind, n)));
    }
    return tp.scale(tp.sum_scalars(terms), T{1} / static_cast<T>(terms.size()));
}

// One pass over a shuffled dataset; returns the mean batch loss. The batch
// gradient is the mean NLL over every step of every batch member.
template <typename T>
double train_epoch(Model<T>& model, const std::vector<PreparedExample>& data,
                   AdamState<T>& adam, const TrainConfig& cfg,
                   std::mt19937_64& rng) {
    if (data.empty()) throw ValidationError("train_epoch: empty dataset");

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0;
    std::size_t batches = 0;
    for (std::size_t b0 = 0; b0 < order.size();
         b0 += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t b1 =
            std::min(order.size(), b0 + static_cast<std::size_t>(cfg.batch_size));
        std::size_t total_steps = 0;
        for (std::size_t k = b0; k < b1; ++k)
            total_steps += data[order[k]].gold.size();

        double term_sum = 0;
        for (std::size_t k = b0; k < b1; ++k) {
            const PreparedExample& ex = data[order[k]];
            try {
                RunContext<T> ctx(model.params);
                ctx.dropout = static_cast<T>(cfg.dropout);
                ctx.rng = &rng;
                auto H = encode_sentence(ctx, model.cfg, ex.ix);
                auto res = forced_decode(ctx, model.cfg, H, ex.gold);
                std::vector<Var> terms;
                for (std::size_t t = 0; t < res.dists.size(); ++t) {
                    const StepKind kind = step_kind(static_cast<int>(t) + 1);
                    terms.push_back(ctx.g.tape().neg_log_pick(
                        res.dists[t], arg_index(ex.gold[t], kind, ex.ix.n)));
                }
                Var sum = ctx.g.tape().sum_scalars(terms);
                term_sum += static_cast<double>(ctx.g.tape().val(sum)(0));
                ctx.g.backward(sum, T{1} / static_cast<T>(total_steps));
            } catch (const NumericError& e) {
                throw NumericError("batch " + std::to_string(batches) +
                                   ", example " + std::to_string(order[k]) +
                                   ": " + e.what());
            }
        }
        loss_sum += term_sum / static_cast<double>(total_steps);
        ++batches;

        model.params.clip_grads(static_cast<T>(cfg.clip_norm));
        adam.update(model.params);
        model.params.zero_grads();
    }
    return loss_sum / static_cast<double>(batches);
}

template <typename T>
struct FitResult {
    Model<T> best;
    double best_f1 = 0;
    int best_epoch = 0;
    int epochs_run = 0;
    std::vector<double> loss_trace;
};

// Trains with teacher forcing, selects the checkpoint maximizing triplet F1
// on dev, stops after `patience` epochs without improvement.
template <typename T>
FitResult<T> fit(Model<T>& model, const std::vector<PreparedExample>& train,
                 const std::vector<PreparedExample>& dev,
                 const TrainConfig& cfg, std::ostream* log = nullptr) {
    cfg.validate();
    if (train.empty()) throw ValidationError("fit: empty training set");
    if (dev.empty()) throw ValidationError("fit: empty dev set");

    std::mt19937_64 rng(cfg.seed);
    AdamState<T> adam;
    adam.lr = static_cast<T>(cfg.lr);
    adam.init(model.params);

    FitResult<T> result;
    result.best = model;
    result.best_f1 = -1;
    int since_improvement = 0;

    TripletSets dev_gold;
    for (const auto& ex : dev) dev_gold.push_back(ex.ix.triplets);

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        const double loss = train_epoch(model, train, adam, cfg, rng);
        result.loss_trace.push_back(loss);
        result.epochs_run = epoch;

        TripletSets dev_pred;
        for (const auto& ex : dev)
            dev_pred.push_back(
                predict_triplets(model, ex.ix, cfg.max_aspects));
        const Prf prf = triplet_prf(dev_pred, dev_gold);

        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        if (log) {
            std::ostringstream line;
            line << "epoch " << epoch << " loss " << loss << " dev_p "
                 << prf.precision << " dev_r " << prf.recall << " dev_f1 "
                 << prf.f1 << " secs " << secs;
            *log << line.str() << "\n";
        }

        if (prf.f1 > result.best_f1) {
            result.best_f1 = prf.f1;
            result.best_epoch = epoch;
            result.best = model;
            since_improvement = 0;
        } else {
            ++since_improvement;
        }
        if (since_improvement >= cfg.patience) break;
        if (result.best_f1 >= 1.0) break;  // nothing left to improve
    }
    return result;
}

}  // namespace reapp
