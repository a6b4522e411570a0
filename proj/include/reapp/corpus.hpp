#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "reapp/common.hpp"

namespace reapp {

enum class Polarity : std::uint8_t { Pos, Neg, Neu };

const char* to_string(Polarity p);
Polarity polarity_from_string(const std::string& s);  // throws ValidationError

struct Token {
    std::string surface;
    std::string pos;
};

struct Triplet {
    int s = 0;  // start token index
    int e = 0;  // end token index, inclusive
    Polarity r = Polarity::Pos;

    friend bool operator==(const Triplet&, const Triplet&) = default;
    friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

struct AnnotatedExample {
    std::vector<Token> tokens;
    std::vector<Triplet> triplets;

    int size() const { return static_cast<int>(tokens.size()); }

    // Checks span bounds and pairwise non-overlap; throws ValidationError
    // naming the violated invariant. `id` goes into the message.
    void validate(const std::string& id) const;
};

// One decoder supervision argument.
struct DecodeArg {
    enum class Kind : std::uint8_t { Position, Pol, NA };
    Kind kind = Kind::NA;
    int position = 0;            // valid when kind == Position
    Polarity pol = Polarity::Pos;  // valid when kind == Pol

    static DecodeArg at(int i) { return {Kind::Position, i, Polarity::Pos}; }
    static DecodeArg of(Polarity p) { return {Kind::Pol, 0, p}; }
    static DecodeArg na() { return {}; }

    friend bool operator==(const DecodeArg&, const DecodeArg&) = default;
};

using TargetSequence = std::vector<DecodeArg>;

// Gold triplets ordered by ascending start, each expanded to (s, e, r),
// terminated by NA. Length is 3K + 1.
TargetSequence linearize_targets(const AnnotatedExample& example);

struct Vocabulary {
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kPosUnk = 0;

    std::vector<std::string> words;  // id -> surface; [0]=PAD, [1]=UNK
    std::vector<char> chars;         // id -> byte; [0]=PAD, [1]=UNK
    std::vector<std::string> pos_tags;  // id -> tag; [0]=UNK

    std::unordered_map<std::string, int> word_index;
    std::unordered_map<char, int> char_index;
    std::unordered_map<std::string, int> pos_index;

    // Exact match, then lowercased form, then UNK.
    int word_id(const std::string& w) const;
    int char_id(char c) const;
    int pos_id(const std::string& tag) const;

    int word_count() const { return static_cast<int>(words.size()); }
    int char_count() const { return static_cast<int>(chars.size()); }
    int pos_count() const { return static_cast<int>(pos_tags.size()); }
};

Vocabulary build_vocabulary(const std::vector<AnnotatedExample>& examples,
                            int min_word_freq = 1);

// Vocabulary-indexed view of an example, ready for embedding lookups.
struct IndexedExample {
    int n = 0;
    std::vector<int> word_ids;
    std::vector<std::vector<int>> char_ids;  // per token, padded to >= 3
    std::vector<int> pos_ids;
    std::vector<Triplet> triplets;
};

IndexedExample index_example(const AnnotatedExample& example,
                             const Vocabulary& vocab);

std::vector<AnnotatedExample> load_dataset(const std::string& path);
std::vector<AnnotatedExample> parse_dataset(std::istream& in,
                                            const std::string& origin);

// Serializes in the same JSONL schema load_dataset accepts.
std::string to_jsonl(const std::vector<AnnotatedExample>& examples);

}  // namespace reapp
