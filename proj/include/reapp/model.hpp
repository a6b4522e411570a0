#pragma once

#include <random>
#include <string>

#include "reapp/corpus.hpp"
#include "reapp/params.hpp"
#include "reapp/tape.hpp"

namespace reapp {

struct ModelConfig {
    int word_dim = 300;
    int char_emb_dim = 50;
    int char_filters = 50;
    int char_filter_width = 3;
    int pos_dim = 50;
    int hidden = 150;    // per direction
    int enc_layers = 2;  // stacked bidirectional layers

    int input_dim() const { return word_dim + char_filters + pos_dim; }
    int ctx_dim() const { return 2 * hidden; }    // h^E_i size
    int dec_dim() const { return ctx_dim(); }     // decoder state size
    int arg_dim() const { return ctx_dim(); }     // argument embedding size

    void validate() const {
        if (word_dim < 1 || char_emb_dim < 1 || char_filters < 1 ||
            pos_dim < 1 || hidden < 1)
            throw ValidationError("model dimensions must be positive");
        if (char_filter_width != 3)
            throw ValidationError("char filter width is fixed at 3");
        if (enc_layers < 1)
            throw ValidationError("enc_layers must be >= 1");
    }
};

// Rows of the decode-argument embedding table.
namespace argrow {
inline constexpr std::size_t kBos = 0;
inline constexpr std::size_t kNa = 1;
inline constexpr std::size_t kPos = 2;
inline constexpr std::size_t kNeg = 3;
inline constexpr std::size_t kNeu = 4;
inline constexpr std::size_t kCount = 5;

inline std::size_t of(Polarity p) {
    switch (p) {
        case Polarity::Pos: return kPos;
        case Polarity::Neg: return kNeg;
        case Polarity::Neu: return kNeu;
    }
    return kNa;
}
}  // namespace argrow

template <typename T>
struct Model {
    ModelConfig cfg;
    int n_words = 0, n_chars = 0, n_pos = 0;
    ParameterSet<T> params;

    template <typename U>
    Model<U> cast() const {
        Model<U> out;
        out.cfg = cfg;
        out.n_words = n_words;
        out.n_chars = n_chars;
        out.n_pos = n_pos;
        out.params = params.template cast<U>();
        return out;
    }
};

namespace detail {

template <typename T>
void add_embedding(ParameterSet<T>& ps, const std::string& name,
                   std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    Tensor<T> t = Tensor<T>::mat(rows, cols);
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    for (T& v : t.data) v = static_cast<T>(dist(rng));
    ps.add(name, std::move(t));
}

template <typename T>
void add_linear(ParameterSet<T>& ps, const std::string& name, std::size_t out,
                std::size_t in, std::mt19937_64& rng) {
    Tensor<T> w = Tensor<T>::mat(out, in);
    init_glorot(w, in, out, rng);
    ps.add(name, std::move(w));
}

// Gate order: input, forget, cell, output. Forget-gate bias starts at 1.
template <typename T>
void add_lstm(ParameterSet<T>& ps, const std::string& prefix, std::size_t in,
              std::size_t hid, std::mt19937_64& rng) {
    add_linear(ps, prefix + ".Wx", 4 * hid, in, rng);
    add_linear(ps, prefix + ".Wh", 4 * hid, hid, rng);
    Tensor<T> b = Tensor<T>::vec(4 * hid);
    for (std::size_t i = hid; i < 2 * hid; ++i) b(i) = T{1};
    ps.add(prefix + ".b", std::move(b));
}

}  // namespace detail

template <typename T>
Model<T> build_model(const ModelConfig& cfg, int n_words, int n_chars,
                     int n_pos, std::uint64_t seed) {
    cfg.validate();
    Model<T> m;
    m.cfg = cfg;
    m.n_words = n_words;
    m.n_chars = n_chars;
    m.n_pos = n_pos;

    std::mt19937_64 rng(seed);
    auto& ps = m.params;
    const std::size_t H = cfg.hidden, D = cfg.ctx_dim();

    detail::add_embedding(ps, "embed.word", n_words, cfg.word_dim, rng);
    detail::add_embedding(ps, "embed.char", n_chars, cfg.char_emb_dim, rng);
    detail::add_embedding(ps, "embed.pos", n_pos, cfg.pos_dim, rng);

    detail::add_linear(ps, "char_conv.W", cfg.char_filters,
                       3 * cfg.char_emb_dim, rng);
    ps.add("char_conv.b", Tensor<T>::vec(cfg.char_filters));

    std::size_t in = cfg.input_dim();
    for (int l = 0; l < cfg.enc_layers; ++l) {
        const std::string base = "enc.l" + std::to_string(l);
        detail::add_lstm(ps, base + ".f", in, H, rng);
        detail::add_lstm(ps, base + ".b", in, H, rng);
        in = D;
    }
    detail::add_lstm(ps, "aspect.f", D, H, rng);
    detail::add_lstm(ps, "aspect.b", D, H, rng);

    for (const char* which : {"attn.bnd", "attn.pol"}) {
        const std::string base = which;
        detail::add_linear(ps, base + ".Wc", D, D, rng);  // on c^D_{t-1}
        ps.add(base + ".bc", Tensor<T>::vec(D));
        detail::add_linear(ps, base + ".Wh", D, D, rng);  // on (scaled) h^E_i
        detail::add_linear(ps, base + ".v", 1, D, rng);
    }

    detail::add_embedding(ps, "dec.argvocab", argrow::kCount, cfg.arg_dim(),
                          rng);
    detail::add_linear(ps, "dec.posproj", cfg.arg_dim(), D, rng);
    detail::add_linear(ps, "dec.Wu", D, cfg.arg_dim() + D, rng);
    detail::add_lstm(ps, "dec.lstm", D, D, rng);

    detail::add_linear(ps, "head.start.W", 1, 2 * D, rng);
    ps.add("head.start.b", Tensor<T>::vec(1));
    detail::add_linear(ps, "head.end.W", 1, 2 * D, rng);
    ps.add("head.end.b", Tensor<T>::vec(1));
    detail::add_linear(ps, "head.na.W", 1, D, rng);
    ps.add("head.na.b", Tensor<T>::vec(1));
    detail::add_linear(ps, "head.pol.W", 3, 4 * D, rng);
    ps.add("head.pol.b", Tensor<T>::vec(3));
    detail::add_linear(ps, "head.sna.W", 1, D, rng);
    ps.add("head.sna.b", Tensor<T>::vec(1));

    return m;
}

// One forward pass over one sentence: graph plus dropout settings.
template <typename T>
struct RunContext {
    Graph<T> g;
    T dropout = T{0};
    std::mt19937_64* rng = nullptr;

    explicit RunContext(ParameterSet<T>& params) : g(params) {}

    bool training() const { return dropout > T{0} && rng != nullptr; }

    Var drop(Var v) {
        return training() ? g.tape().dropout(v, dropout, *rng) : v;
    }
};

// Standard LSTM step; x is the (already projected) input.
template <typename T>
std::pair<Var, Var> lstm_cell(Graph<T>& g, const std::string& prefix, Var x,
                              Var h, Var c) {
    auto& tp = g.tape();
    const std::size_t hid = tp.val(c).numel();
    Var z = tp.add(tp.add(tp.matvec(g.p(prefix + ".Wx"), x),
                          tp.matvec(g.p(prefix + ".Wh"), h)),
                   g.p(prefix + ".b"));
    Var gi = tp.sigmoid_(tp.slice(z, 0, hid));
    Var gf = tp.sigmoid_(tp.slice(z, hid, hid));
    Var gc = tp.tanh_(tp.slice(z, 2 * hid, hid));
    Var go = tp.sigmoid_(tp.slice(z, 3 * hid, hid));
    Var c2 = tp.add(tp.mul(gf, c), tp.mul(gi, gc));
    Var h2 = tp.mul(go, tp.tanh_(c2));
    return {h2, c2};
}

// Bidirectional pass over a sequence of input vars; returns per-position
// [fwd_i; bwd_i] plus the two final directional hidden states.
template <typename T>
struct BiLstmOut {
    std::vector<Var> rows;
    Var fwd_last, bwd_last;
};

template <typename T>
BiLstmOut<T> bilstm(Graph<T>& g, const std::string& prefix,
                    const std::vector<Var>& xs, std::size_t hid) {
    auto& tp = g.tape();
    const std::size_t n = xs.size();
    std::vector<Var> fwd(n), bwd(n);
    Var h = g.constant(Tensor<T>::vec(hid));
    Var c = g.constant(Tensor<T>::vec(hid));
    for (std::size_t i = 0; i < n; ++i) {
        std::tie(h, c) = lstm_cell(g, prefix + ".f", xs[i], h, c);
        fwd[i] = h;
    }
    Var fwd_last = h;
    h = g.constant(Tensor<T>::vec(hid));
    c = g.constant(Tensor<T>::vec(hid));
    for (std::size_t i = n; i-- > 0;) {
        std::tie(h, c) = lstm_cell(g, prefix + ".b", xs[i], h, c);
        bwd[i] = h;
    }
    Var bwd_last = h;
    BiLstmOut<T> out;
    out.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.rows[i] = tp.concat({fwd[i], bwd[i]});
    out.fwd_last = fwd_last;
    out.bwd_last = bwd_last;
    return out;
}

}  // namespace reapp
