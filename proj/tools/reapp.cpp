// Command-line front end: train, evaluate, predict, and gradient-check the
// triplet extraction model.
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "reapp/checkpoint.hpp"
#include "reapp/config.hpp"
#include "reapp/gradcheck.hpp"
#include "reapp/train.hpp"
#include "reapp/vectors.hpp"

namespace {

using namespace reapp;

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw ValidationError("cannot open output file: " + out_path);
    os << text;
}

int cmd_train(const std::string& config_path, std::uint64_t seed_override,
              bool has_seed) {
    RunConfig cfg = load_config(config_path);
    if (has_seed) cfg.train.seed = seed_override;
    cfg.validate_for_training();
    if (cfg.dev_path.empty())
        throw ValidationError("config: paths.dev is required for training");
    if (cfg.checkpoint_path.empty())
        throw ValidationError(
            "config: paths.checkpoint is required for training");

    auto train_set = load_dataset(cfg.train_path);
    auto dev_set = load_dataset(cfg.dev_path);
    auto vocab = build_vocabulary(train_set, cfg.min_word_freq);

    auto model = build_model<double>(cfg.model, vocab.word_count(),
                                     vocab.char_count(), vocab.pos_count(),
                                     cfg.train.seed);
    if (!cfg.vectors_path.empty()) {
        const auto filled = load_pretrained_vectors(
            cfg.vectors_path, vocab, model.params.at("embed.word").value);
        std::cout << "loaded " << filled << " pretrained word vectors\n";
    }

    auto result = fit(model, prepare(train_set, vocab),
                      prepare(dev_set, vocab), cfg.train, &std::cout);
    std::cout << "best dev_f1 " << result.best_f1 << " at epoch "
              << result.best_epoch << " (" << result.epochs_run
              << " epochs run)\n";

    auto best32 = result.best.template cast<float>();
    save_checkpoint(cfg.checkpoint_path, best32, vocab);
    std::cout << "checkpoint written to " << cfg.checkpoint_path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& ckpt_path, const std::string& data_path,
                 const std::string& out_path, int max_aspects) {
    auto ck = load_checkpoint(ckpt_path);
    auto data = load_dataset(data_path);

    TripletSets pred, gold;
    for (const auto& ex : data) {
        gold.push_back(ex.triplets);
        pred.push_back(predict_triplets(
            ck.model, index_example(ex, ck.vocab), max_aspects));
    }
    const EvalReport report = evaluate(pred, gold);
    std::cout << report.to_text();
    if (!out_path.empty()) write_or_print(out_path, report.to_json() + "\n");
    return 0;
}

int cmd_predict(const std::string& ckpt_path, const std::string& data_path,
                const std::string& out_path, int max_aspects) {
    auto ck = load_checkpoint(ckpt_path);
    auto data = load_dataset(data_path);

    std::vector<AnnotatedExample> out = data;
    for (auto& ex : out) {
        ex.triplets = predict_triplets(ck.model, index_example(ex, ck.vocab),
                                       max_aspects);
    }
    write_or_print(out_path, to_jsonl(out));
    return 0;
}

int cmd_gradcheck(const std::string& config_path, std::uint64_t seed,
                  bool corrupt) {
    RunConfig cfg =
        config_path.empty() ? RunConfig{} : load_config(config_path);
    if (config_path.empty()) {
        // Without a config, fall back to dimensions small enough to finish
        // the finite-difference sweep in seconds.
        cfg.model.word_dim = 8;
        cfg.model.char_emb_dim = 8;
        cfg.model.char_filters = 8;
        cfg.model.pos_dim = 8;
        cfg.model.hidden = 8;
    }
    cfg.model.validate();

    // A fixed two-aspect sentence exercises every step kind and both
    // attention paths.
    AnnotatedExample ann;
    for (const char* w : {"the", "pad", "thai", "was", "great", "."})
        ann.tokens.push_back({w, "NN"});
    ann.triplets = {{1, 2, Polarity::Pos}, {4, 4, Polarity::Neu}};
    auto vocab = build_vocabulary({ann});
    auto ix = index_example(ann, vocab);
    auto gold = linearize_targets(ann);

    auto model = build_model<double>(cfg.model, vocab.word_count(),
                                     vocab.char_count(), vocab.pos_count(),
                                     seed);
    std::cout << "checking " << model.params.scalar_count()
              << " parameter scalars\n";

    auto loss_fn = [&] {
        RunContext<double> ctx(model.params);
        auto H = encode_sentence(ctx, cfg.model, ix);
        auto res = forced_decode(ctx, cfg.model, H, gold);
        Var loss = sequence_nll(ctx.g, res.dists, gold, ix.n);
        return ctx.g.tape().val(loss)(0);
    };
    auto backward_fn = [&] {
        RunContext<double> ctx(model.params);
        auto H = encode_sentence(ctx, cfg.model, ix);
        auto res = forced_decode(ctx, cfg.model, H, gold);
        Var loss = sequence_nll(ctx.g, res.dists, gold, ix.n);
        ctx.g.backward(loss);
        if (corrupt) {
            // Negative control: a deliberately wrong gradient must fail.
            auto& g = model.params.at("dec.Wu").grad;
            g(0) += 0.5;
        }
    };

    const auto rep = gradient_check(model.params, loss_fn, backward_fn);
    std::cout << "max_rel_err " << rep.max_rel_err << " at " << rep.worst_param
              << "[" << rep.worst_index << "] over " << rep.checked
              << " scalars\n";
    if (rep.max_rel_err >= 1e-4) {
        std::cout << "gradient check FAILED (threshold 1e-4)\n";
        return 2;
    }
    std::cout << "gradient check passed (threshold 1e-4)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aspect/polarity triplet extraction"};
    app.require_subcommand(1);

    std::string config_path, ckpt_path, data_path, out_path;
    std::uint64_t seed = 1;
    int max_aspects = 8;
    bool corrupt = false;

    auto* train = app.add_subcommand("train", "train a model from a config");
    train->add_option("--config", config_path, "run configuration file")
        ->required();
    auto* train_seed = train->add_option("--seed", seed,
                                         "override the configured seed");

    auto* eval = app.add_subcommand("evaluate",
                                    "score a checkpoint on a dataset");
    eval->add_option("--checkpoint", ckpt_path, "model checkpoint")->required();
    eval->add_option("--data", data_path, "JSONL dataset")->required();
    eval->add_option("--out", out_path, "write a JSON report here");
    eval->add_option("--max-aspects", max_aspects, "decoding aspect cap");

    auto* predict = app.add_subcommand("predict",
                                       "decode triplets for a dataset");
    predict->add_option("--checkpoint", ckpt_path, "model checkpoint")
        ->required();
    predict->add_option("--data", data_path, "JSONL dataset")->required();
    predict->add_option("--out", out_path, "write predictions here");
    predict->add_option("--max-aspects", max_aspects, "decoding aspect cap");

    auto* gradcheck = app.add_subcommand(
        "gradcheck", "compare gradients against finite differences");
    gradcheck->add_option("--config", config_path,
                          "optional config for model dimensions");
    gradcheck->add_option("--seed", seed, "model initialization seed");
    gradcheck
        ->add_flag("--corrupt-gradient", corrupt,
                   "perturb one gradient entry (self-test of the checker)")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
        if (train->parsed())
            return cmd_train(config_path, seed, train_seed->count() > 0);
        if (eval->parsed())
            return cmd_evaluate(ckpt_path, data_path, out_path, max_aspects);
        if (predict->parsed())
            return cmd_predict(ckpt_path, data_path, out_path, max_aspects);
        if (gradcheck->parsed()) return cmd_gradcheck(config_path, seed, corrupt);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
