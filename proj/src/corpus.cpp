#include "reapp/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reapp {

using nlohmann::json;

const char* to_string(Polarity p) {
    switch (p) {
        case Polarity::Pos: return "POS";
        case Polarity::Neg: return "NEG";
        case Polarity::Neu: return "NEU";
    }
    return "?";
}

Polarity polarity_from_string(const std::string& s) {
    if (s == "POS") return Polarity::Pos;
    if (s == "NEG") return Polarity::Neg;
    if (s == "NEU") return Polarity::Neu;
    throw ValidationError("unknown polarity label: '" + s + "'");
}

void AnnotatedExample::validate(const std::string& id) const {
    const int n = size();
    if (n < 1) throw ValidationError(id + ": sentence is empty");
    for (const Token& t : tokens) {
        if (t.surface.empty())
            throw ValidationError(id + ": empty token surface");
    }
    std::vector<char> covered(tokens.size(), 0);
    for (const Triplet& tr : triplets) {
        if (tr.s < 0 || tr.e >= n)
            throw ValidationError(id + ": triplet span out of range");
        if (tr.e < tr.s) throw ValidationError(id + ": end before start");
        for (int i = tr.s; i <= tr.e; ++i) {
            if (covered[i])
                throw ValidationError(id + ": overlapping aspect spans at token " +
                                      std::to_string(i));
            covered[i] = 1;
        }
    }
}

TargetSequence linearize_targets(const AnnotatedExample& example) {
    std::vector<Triplet> sorted = example.triplets;
    std::sort(sorted.begin(), sorted.end(),
              [](const Triplet& a, const Triplet& b) { return a.s < b.s; });
    TargetSequence seq;
    seq.reserve(sorted.size() * 3 + 1);
    for (const Triplet& t : sorted) {
        seq.push_back(DecodeArg::at(t.s));
        seq.push_back(DecodeArg::at(t.e));
        seq.push_back(DecodeArg::of(t.r));
    }
    seq.push_back(DecodeArg::na());
    return seq;
}

namespace {

std::string lowercased(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

int Vocabulary::word_id(const std::string& w) const {
    auto it = word_index.find(w);
    if (it != word_index.end()) return it->second;
    it = word_index.find(lowercased(w));
    if (it != word_index.end()) return it->second;
    return kUnk;
}

int Vocabulary::char_id(char c) const {
    auto it = char_index.find(c);
    return it == char_index.end() ? kUnk : it->second;
}

int Vocabulary::pos_id(const std::string& tag) const {
    auto it = pos_index.find(tag);
    return it == pos_index.end() ? kPosUnk : it->second;
}

Vocabulary build_vocabulary(const std::vector<AnnotatedExample>& examples,
                            int min_word_freq) {
    if (examples.empty()) throw ValidationError("build_vocabulary: empty corpus");
    if (min_word_freq < 1)
        throw ValidationError("build_vocabulary: min_word_freq must be >= 1");

    Vocabulary v;
    v.words = {"<pad>", "<unk>"};
    v.word_index = {{"<pad>", 0}, {"<unk>", 1}};
    v.chars = {'\0', '\x01'};  // PAD, UNK placeholders
    v.char_index = {};
    v.pos_tags = {"<unk>"};
    v.pos_index = {{"<unk>", 0}};

    // Frequencies plus first-occurrence order for deterministic ids.
    std::unordered_map<std::string, int> freq;
    std::vector<std::string> word_order;
    for (const auto& ex : examples) {
        for (const Token& t : ex.tokens) {
            if (freq[t.surface]++ == 0) word_order.push_back(t.surface);
            for (char c : t.surface) {
                if (!v.char_index.count(c)) {
                    v.char_index[c] = static_cast<int>(v.chars.size());
                    v.chars.push_back(c);
                }
            }
            if (!v.pos_index.count(t.pos)) {
                v.pos_index[t.pos] = static_cast<int>(v.pos_tags.size());
                v.pos_tags.push_back(t.pos);
            }
        }
    }
    for (const std::string& w : word_order) {
        if (freq[w] >= min_word_freq && !v.word_index.count(w)) {
            v.word_index[w] = static_cast<int>(v.words.size());
            v.words.push_back(w);
        }
    }
    return v;
}

IndexedExample index_example(const AnnotatedExample& example,
                             const Vocabulary& vocab) {
    IndexedExample ix;
    ix.n = example.size();
    ix.triplets = example.triplets;
    for (const Token& t : example.tokens) {
        ix.word_ids.push_back(vocab.word_id(t.surface));
        ix.pos_ids.push_back(vocab.pos_id(t.pos));
        std::vector<int> cs;
        for (char c : t.surface) cs.push_back(vocab.char_id(c));
        while (cs.size() < 3) cs.push_back(Vocabulary::kPad);
        ix.char_ids.push_back(std::move(cs));
    }
    return ix;
}

namespace {

AnnotatedExample parse_record(const json& rec, const std::string& id) {
    if (!rec.is_object() || !rec.contains("tokens") || !rec.contains("pos") ||
        !rec.contains("triplets"))
        throw ValidationError(id + ": record must have tokens, pos, triplets");
    const auto& toks = rec.at("tokens");
    const auto& pos = rec.at("pos");
    const auto& trips = rec.at("triplets");
    if (!toks.is_array() || !pos.is_array() || !trips.is_array())
        throw ValidationError(id + ": tokens/pos/triplets must be arrays");
    if (toks.size() != pos.size())
        throw ValidationError(id + ": |pos| must equal |tokens|");

    AnnotatedExample ex;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (!toks[i].is_string() || !pos[i].is_string())
            throw ValidationError(id + ": tokens and pos entries must be strings");
        ex.tokens.push_back({toks[i].get<std::string>(),
                             pos[i].get<std::string>()});
    }
    for (const auto& t : trips) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
            !t[1].is_number_integer() || !t[2].is_string())
            throw ValidationError(id + ": triplet must be [s, e, polarity]");
        ex.triplets.push_back({t[0].get<int>(), t[1].get<int>(),
                               polarity_from_string(t[2].get<std::string>())});
    }
    ex.validate(id);
    return ex;
}

}  // namespace

std::vector<AnnotatedExample> parse_dataset(std::istream& in,
                                            const std::string& origin) {
    std::vector<AnnotatedExample> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string id = origin + ":" + std::to_string(lineno);
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ValidationError(id + ": JSON parse failure: " + e.what());
        }
        out.push_back(parse_record(rec, id));
    }
    return out;
}

std::vector<AnnotatedExample> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset file: " + path);
    return parse_dataset(in, path);
}

std::string to_jsonl(const std::vector<AnnotatedExample>& examples) {
    std::ostringstream out;
    for (const auto& ex : examples) {
        json rec;
        rec["tokens"] = json::array();
        rec["pos"] = json::array();
        rec["triplets"] = json::array();
        for (const Token& t : ex.tokens) {
            rec["tokens"].push_back(t.surface);
            rec["pos"].push_back(t.pos);
        }
        for (const Triplet& t : ex.triplets)
            rec["triplets"].push_back({t.s, t.e, to_string(t.r)});
        out << rec.dump() << "\n";
    }
    return out.str();
}

}  // namespace reapp
