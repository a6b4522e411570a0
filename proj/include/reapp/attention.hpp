#pragma once

#include <utility>
#include <vector>

#include "reapp/model.hpp"

namespace reapp {

template <typename T>
struct AttentionOutput {
    Var context;  // e_t
    Var weights;  // alpha over tokens
};

// Distance of token i to the span and the resulting scale 1 - d/n.
// Inside the span d = 0; outside it is the distance to the nearer boundary.
struct TokenDistance {
    int d;
    double scale;
};

inline TokenDistance token_distance(int s, int e, int i, int n) {
    int d = 0;
    if (i < s)
        d = s - i;
    else if (i > e)
        d = i - e;
    return {d, 1.0 - double(d) / double(n)};
}

// Per-sentence cache of the token-side projections for the boundary
// attention; they do not depend on the decoding step.
template <typename T>
std::vector<Var> boundary_token_proj(Graph<T>& g, const std::vector<Var>& H) {
    std::vector<Var> out;
    out.reserve(H.size());
    for (Var h : H) out.push_back(g.tape().matvec(g.p("attn.bnd.Wh"), h));
    return out;
}

// Attention for start/end steps: score_i = v . tanh(m + proj_i),
// m from the previous decoder cell state.
template <typename T>
AttentionOutput<T> boundary_context(Graph<T>& g, Var c_prev,
                                    const std::vector<Var>& H,
                                    const std::vector<Var>& token_proj) {
    auto& tp = g.tape();
    Var m = tp.add(tp.matvec(g.p("attn.bnd.Wc"), c_prev), g.p("attn.bnd.bc"));
    std::vector<Var> scores;
    scores.reserve(H.size());
    for (std::size_t i = 0; i < H.size(); ++i)
        scores.push_back(
            tp.matvec(g.p("attn.bnd.v"), tp.tanh_(tp.add(m, token_proj[i]))));
    Var alpha = tp.softmax(tp.stack_scalars(scores));
    return {tp.weighted_sum(alpha, H), alpha};
}

// Attention for polarity steps: each token representation is scaled by
// 1 - d_i/n before scoring and before entering the context sum.
template <typename T>
AttentionOutput<T> polarity_context(Graph<T>& g, Var c_prev,
                                    const std::vector<Var>& H, int s, int e) {
    auto& tp = g.tape();
    const int n = static_cast<int>(H.size());
    if (s < 0 || e < s || e >= n)
        throw ValidationError("polarity_context: invalid span");
    Var m = tp.add(tp.matvec(g.p("attn.pol.Wc"), c_prev), g.p("attn.pol.bc"));
    std::vector<Var> scaled, scores;
    scaled.reserve(H.size());
    scores.reserve(H.size());
    for (int i = 0; i < n; ++i) {
        const T p = static_cast<T>(token_distance(s, e, i, n).scale);
        Var hp = tp.scale(H[i], p);
        scaled.push_back(hp);
        Var proj = tp.matvec(g.p("attn.pol.Wh"), hp);
        scores.push_back(
            tp.matvec(g.p("attn.pol.v"), tp.tanh_(tp.add(m, proj))));
    }
    Var alpha = tp.softmax(tp.stack_scalars(scores));
    return {tp.weighted_sum(alpha, scaled), alpha};
}

}  // namespace reapp
