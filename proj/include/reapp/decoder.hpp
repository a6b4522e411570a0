#pragma once

#include <functional>
#include <string>
#include <vector>

#include "reapp/attention.hpp"
#include "reapp/encoder.hpp"
#include "reapp/model.hpp"

namespace reapp {

enum class StepKind { Start, End, Pol };

// t counts from 1; t%3 = 1 start, 2 end, 0 polarity.
inline StepKind step_kind(int t) {
    switch (t % 3) {
        case 1: return StepKind::Start;
        case 2: return StepKind::End;
        default: return StepKind::Pol;
    }
}

struct DecodeOptions {
    int max_aspects = 8;
    // Mask the NA entry of End/Polarity distributions so every started
    // triplet completes. On for inference, off for teacher forcing so the
    // trained distributions keep their NA logits.
    bool mask_na_completion = true;
};

// Index of an argument inside a step distribution. Start/End distributions
// are [positions..., NA]; polarity distributions are [POS, NEG, NEU, NA].
inline std::size_t arg_index(const DecodeArg& arg, StepKind kind, int n) {
    if (kind == StepKind::Pol) {
        if (arg.kind == DecodeArg::Kind::NA) return 3;
        if (arg.kind != DecodeArg::Kind::Pol)
            throw ValidationError("polarity step expects a polarity argument");
        return static_cast<std::size_t>(arg.pol);
    }
    if (arg.kind == DecodeArg::Kind::NA) return static_cast<std::size_t>(n);
    if (arg.kind != DecodeArg::Kind::Position)
        throw ValidationError("position step expects a position argument");
    return static_cast<std::size_t>(arg.position);
}

// q^s_i = selu([h^D; h^E_i] W + b) per position, q^NA from the shared NA
// head; covered positions are removed before the softmax.
template <typename T>
Var score_positions(RunContext<T>& ctx, const std::string& head, Var h,
                    const std::vector<Var>& H, std::vector<char> keep) {
    auto& tp = ctx.g.tape();
    std::vector<Var> qs;
    qs.reserve(H.size() + 1);
    for (Var hi : H) {
        Var feat = tp.concat({h, hi});
        qs.push_back(tp.selu_(tp.add(tp.matvec(ctx.g.p(head + ".W"), feat),
                                     ctx.g.p(head + ".b"))));
    }
    qs.push_back(tp.selu_(tp.add(tp.matvec(ctx.g.p("head.na.W"), h),
                                 ctx.g.p("head.na.b"))));
    return tp.softmax_masked(tp.stack_scalars(qs), std::move(keep));
}

template <typename T>
Var score_start(RunContext<T>& ctx, Var h, const std::vector<Var>& H,
                const std::vector<char>& covered) {
    std::vector<char> keep(H.size() + 1, 1);
    for (std::size_t i = 0; i < H.size(); ++i) keep[i] = !covered[i];
    return score_positions(ctx, "head.start", h, H, std::move(keep));
}

// Admissible ends: the covered-free contiguous run starting at s. This is
// tighter than an i >= s check alone; it keeps emitted spans disjoint from
// previously generated aspects.
template <typename T>
Var score_end(RunContext<T>& ctx, Var h, const std::vector<Var>& H, int s,
              const std::vector<char>& covered, bool mask_na) {
    const int n = static_cast<int>(H.size());
    int limit = s;
    while (limit < n && !covered[limit]) ++limit;
    std::vector<char> keep(H.size() + 1, 0);
    for (int i = s; i < limit; ++i) keep[i] = 1;
    keep[H.size()] = !mask_na;
    return score_positions(ctx, "head.end", h, H, std::move(keep));
}

// h_a = [h^E_s; h_sec; h^E_e] with h_sec from a single bidirectional pass
// over the span.
template <typename T>
Var encode_aspect(RunContext<T>& ctx, const ModelConfig& cfg,
                  const std::vector<Var>& H, int s, int e) {
    auto& tp = ctx.g.tape();
    if (s < 0 || e < s || e >= static_cast<int>(H.size()))
        throw ValidationError("encode_aspect: invalid span");
    std::vector<Var> span(H.begin() + s, H.begin() + e + 1);
    auto out = bilstm(ctx.g, "aspect", span,
                      static_cast<std::size_t>(cfg.hidden));
    Var h_sec = tp.concat({out.fwd_last, out.bwd_last});
    return tp.concat({H[s], h_sec, H[e]});
}

template <typename T>
Var score_polarity(RunContext<T>& ctx, Var h, Var h_a, bool mask_na) {
    auto& tp = ctx.g.tape();
    Var qr = tp.selu_(tp.add(
        tp.matvec(ctx.g.p("head.pol.W"), tp.concat({h_a, h})),
        ctx.g.p("head.pol.b")));
    Var qna = tp.selu_(tp.add(tp.matvec(ctx.g.p("head.sna.W"), h),
                              ctx.g.p("head.sna.b")));
    std::vector<char> keep = {1, 1, 1, static_cast<char>(!mask_na)};
    return tp.softmax_masked(tp.concat({qr, qna}), std::move(keep));
}

template <typename T>
struct DecodeResult {
    std::vector<Var> dists;       // one StepDistribution per argument
    std::vector<DecodeArg> args;  // the argument chosen/forced at each step
    std::vector<Triplet> triplets;
    std::vector<char> coverage;   // final coverage set
};

// Shared decode loop. `choose` picks the argument for each step from the
// step distribution; greedy and teacher forcing differ only in the chooser.
template <typename T>
DecodeResult<T> run_decoder(
    RunContext<T>& ctx, const ModelConfig& cfg, const std::vector<Var>& H,
    const DecodeOptions& opts,
    const std::function<DecodeArg(int step, StepKind kind,
                                  const Tensor<T>& probs)>& choose) {
    auto& tp = ctx.g.tape();
    const int n = static_cast<int>(H.size());
    const std::size_t D = cfg.dec_dim();

    DecodeResult<T> res;
    res.coverage.assign(n, 0);

    Var h = ctx.g.constant(Tensor<T>::vec(D));
    Var c = ctx.g.constant(Tensor<T>::vec(D));
    Var v_prev = tp.gather_row(ctx.g.p("dec.argvocab"), argrow::kBos);
    auto bnd_proj = boundary_token_proj(ctx.g, H);

    int cur_s = -1, cur_e = -1;
    for (int t = 1;; ++t) {
        const StepKind kind = step_kind(t);
        Var e_t = (kind == StepKind::Pol)
                      ? polarity_context(ctx.g, c, H, cur_s, cur_e).context
                      : boundary_context(ctx.g, c, H, bnd_proj).context;
        Var input = ctx.drop(tp.concat({v_prev, e_t}));
        Var u = tp.matvec(ctx.g.p("dec.Wu"), input);
        std::tie(h, c) = lstm_cell(ctx.g, "dec.lstm", u, h, c);

        Var dist{};
        switch (kind) {
            case StepKind::Start:
                dist = score_start(ctx, h, H, res.coverage);
                break;
            case StepKind::End:
                dist = score_end(ctx, h, H, cur_s, res.coverage,
                                 opts.mask_na_completion);
                break;
            case StepKind::Pol: {
                Var h_a = encode_aspect(ctx, cfg, H, cur_s, cur_e);
                dist = score_polarity(ctx, h, h_a, opts.mask_na_completion);
                break;
            }
        }

        const DecodeArg arg =
            choose(static_cast<int>(res.args.size()), kind, tp.val(dist));
        res.dists.push_back(dist);
        res.args.push_back(arg);

        switch (kind) {
            case StepKind::Start:
                if (arg.kind == DecodeArg::Kind::NA) return res;
                cur_s = arg.position;
                v_prev = tp.matvec(ctx.g.p("dec.posproj"), H[cur_s]);
                break;
            case StepKind::End:
                cur_e = arg.position;
                v_prev = tp.matvec(ctx.g.p("dec.posproj"), H[cur_e]);
                break;
            case StepKind::Pol:
                res.triplets.push_back({cur_s, cur_e, arg.pol});
                for (int i = cur_s; i <= cur_e; ++i) res.coverage[i] = 1;
                v_prev = tp.gather_row(ctx.g.p("dec.argvocab"),
                                       argrow::of(arg.pol));
                if (static_cast<int>(res.triplets.size()) >= opts.max_aspects)
                    return res;
                break;
        }
    }
}

// Teacher forcing: the gold sequence drives arguments, coverage, and masks.
// Throws NumericError if a gold argument lands on a masked-out entry.
template <typename T>
DecodeResult<T> forced_decode(RunContext<T>& ctx, const ModelConfig& cfg,
                              const std::vector<Var>& H,
                              const TargetSequence& gold) {
    DecodeOptions opts;
    opts.mask_na_completion = false;
    opts.max_aspects = static_cast<int>(gold.size());  // never binding
    const int n = static_cast<int>(H.size());
    auto choose = [&](int step, StepKind kind,
                      const Tensor<T>& probs) -> DecodeArg {
        const DecodeArg& g = gold.at(static_cast<std::size_t>(step));
        const std::size_t idx = arg_index(g, kind, n);
        if (!(probs(idx) > T{0}))
            throw NumericError("gold argument masked out at step " +
                               std::to_string(step + 1));
        return g;
    };
    DecodeResult<T> res = run_decoder<T>(ctx, cfg, H, opts, choose);
    if (res.args.size() != gold.size())
        throw ValidationError("forced decode consumed " +
                              std::to_string(res.args.size()) + " of " +
                              std::to_string(gold.size()) + " gold arguments");
    return res;
}

// Greedy argmax decoding; lowest index wins ties. NA is admissible only at
// start steps.
template <typename T>
DecodeResult<T> decode_greedy(RunContext<T>& ctx, const ModelConfig& cfg,
                              const std::vector<Var>& H, int max_aspects) {
    if (max_aspects < 1)
        throw ValidationError("decode_greedy: max_aspects must be >= 1");
    DecodeOptions opts;
    opts.mask_na_completion = true;
    opts.max_aspects = max_aspects;
    const int n = static_cast<int>(H.size());
    auto choose = [n](int, StepKind kind, const Tensor<T>& probs) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.numel(); ++i)
            if (probs(i) > probs(best)) best = i;
        if (kind == StepKind::Pol) {
            if (best == 3) return DecodeArg::na();
            return DecodeArg::of(static_cast<Polarity>(best));
        }
        if (best == static_cast<std::size_t>(n)) return DecodeArg::na();
        return DecodeArg::at(static_cast<int>(best));
    };
    return run_decoder<T>(ctx, cfg, H, opts, choose);
}

// Convenience: encode + greedy decode with frozen parameters, no dropout.
template <typename T>
std::vector<Triplet> predict_triplets(Model<T>& model, const IndexedExample& ex,
                                      int max_aspects) {
    RunContext<T> ctx(model.params);
    auto H = encode_sentence(ctx, model.cfg, ex);
    return decode_greedy(ctx, model.cfg, H, max_aspects).triplets;
}

}  // namespace reapp
