#pragma once

#include <random>

#include "reapp/decoder.hpp"

namespace reapp::testing {

inline ModelConfig tiny_config(int dim = 8) {
    ModelConfig cfg;
    cfg.word_dim = dim;
    cfg.char_emb_dim = dim;
    cfg.char_filters = dim;
    cfg.pos_dim = dim;
    cfg.hidden = dim;
    return cfg;
}

inline constexpr int kWords = 20, kChars = 12, kPos = 6;

template <typename T>
Model<T> tiny_model(std::uint64_t seed, int dim = 8) {
    return build_model<T>(tiny_config(dim), kWords, kChars, kPos, seed);
}

inline IndexedExample random_example(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> word(2, kWords - 1);
    std::uniform_int_distribution<int> chr(2, kChars - 1);
    std::uniform_int_distribution<int> pos(1, kPos - 1);
    std::uniform_int_distribution<int> len(3, 6);
    IndexedExample ex;
    ex.n = n;
    for (int i = 0; i < n; ++i) {
        ex.word_ids.push_back(word(rng));
        ex.pos_ids.push_back(pos(rng));
        std::vector<int> cs(static_cast<std::size_t>(len(rng)));
        for (auto& c : cs) c = chr(rng);
        ex.char_ids.push_back(std::move(cs));
    }
    return ex;
}

}  // namespace reapp::testing
