#pragma once

#include <vector>

#include "reapp/model.hpp"

namespace reapp {

// Width-3 convolution over the token's character embeddings, max-pooled
// over positions. char_ids are already padded to length >= 3.
template <typename T>
Var char_encode(RunContext<T>& ctx, const ModelConfig& cfg,
                const std::vector<int>& char_ids) {
    auto& tp = ctx.g.tape();
    if (char_ids.size() < 3)
        throw ValidationError("char_encode: char sequence shorter than filter");
    Var table = ctx.g.p("embed.char");
    std::vector<Var> embs;
    embs.reserve(char_ids.size());
    for (int id : char_ids)
        embs.push_back(tp.gather_row(table, static_cast<std::size_t>(id)));

    Var pooled{};
    for (std::size_t w = 0; w + 3 <= embs.size(); ++w) {
        Var window = tp.concat({embs[w], embs[w + 1], embs[w + 2]});
        Var conv = tp.add(tp.matvec(ctx.g.p("char_conv.W"), window),
                          ctx.g.p("char_conv.b"));
        pooled = (w == 0) ? conv : tp.emax(pooled, conv);
    }
    return pooled;
}

// x_i = [word; char; pos]
template <typename T>
Var embed_token(RunContext<T>& ctx, const ModelConfig& cfg, int word_id,
                const std::vector<int>& char_ids, int pos_id) {
    auto& tp = ctx.g.tape();
    Var w = tp.gather_row(ctx.g.p("embed.word"),
                          static_cast<std::size_t>(word_id));
    Var c = char_encode(ctx, cfg, char_ids);
    Var p = tp.gather_row(ctx.g.p("embed.pos"),
                          static_cast<std::size_t>(pos_id));
    return tp.concat({w, c, p});
}

// Stacked bidirectional encoding; returns one ctx_dim() row per token.
// Dropout is applied to the token inputs and between stacked layers.
template <typename T>
std::vector<Var> encode_sentence(RunContext<T>& ctx, const ModelConfig& cfg,
                                 const IndexedExample& ex) {
    std::vector<Var> xs;
    xs.reserve(ex.n);
    for (int i = 0; i < ex.n; ++i)
        xs.push_back(ctx.drop(
            embed_token(ctx, cfg, ex.word_ids[i], ex.char_ids[i],
                        ex.pos_ids[i])));

    for (int l = 0; l < cfg.enc_layers; ++l) {
        if (l > 0)
            for (Var& x : xs) x = ctx.drop(x);
        auto out = bilstm(ctx.g, "enc.l" + std::to_string(l), xs,
                          static_cast<std::size_t>(cfg.hidden));
        xs = std::move(out.rows);
    }
    return xs;
}

}  // namespace reapp
