#include "reapp/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace reapp {

namespace {

constexpr char kMagic[8] = {'R', 'E', 'A', 'P', 'P', 'C', 'K', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw ValidationError("checkpoint: truncated file");
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
           (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw ValidationError("checkpoint: truncated file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::string get_str(std::istream& is) {
    const std::uint32_t len = get_u32(is);
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw ValidationError("checkpoint: truncated file");
    return s;
}

void put_f32(std::ostream& os, float f) {
    std::uint32_t bits;
    static_assert(sizeof(bits) == sizeof(f));
    std::memcpy(&bits, &f, 4);
    put_u32(os, bits);
}

float get_f32(std::istream& is) {
    const std::uint32_t bits = get_u32(is);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

}  // namespace

void save_checkpoint(const std::string& path, const Model<float>& model,
                     const Vocabulary& vocab) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open checkpoint for writing: " + path);
    os.write(kMagic, 8);

    const ModelConfig& c = model.cfg;
    for (int v : {c.word_dim, c.char_emb_dim, c.char_filters,
                  c.char_filter_width, c.pos_dim, c.hidden, c.enc_layers})
        put_u32(os, static_cast<std::uint32_t>(v));

    put_u32(os, static_cast<std::uint32_t>(vocab.words.size()));
    for (const auto& w : vocab.words) put_str(os, w);
    put_u32(os, static_cast<std::uint32_t>(vocab.chars.size()));
    os.write(vocab.chars.data(),
             static_cast<std::streamsize>(vocab.chars.size()));
    put_u32(os, static_cast<std::uint32_t>(vocab.pos_tags.size()));
    for (const auto& t : vocab.pos_tags) put_str(os, t);

    put_u32(os, static_cast<std::uint32_t>(model.params.items.size()));
    for (const auto& [name, p] : model.params.items) {
        put_str(os, name);
        put_u32(os, static_cast<std::uint32_t>(p.value.shape.size()));
        for (std::size_t d : p.value.shape) put_u64(os, d);
        for (float v : p.value.data) put_f32(os, v);
    }
    if (!os) throw ValidationError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open checkpoint: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw ValidationError("not a checkpoint file: " + path);

    Checkpoint ck;
    ModelConfig& c = ck.model.cfg;
    c.word_dim = static_cast<int>(get_u32(is));
    c.char_emb_dim = static_cast<int>(get_u32(is));
    c.char_filters = static_cast<int>(get_u32(is));
    c.char_filter_width = static_cast<int>(get_u32(is));
    c.pos_dim = static_cast<int>(get_u32(is));
    c.hidden = static_cast<int>(get_u32(is));
    c.enc_layers = static_cast<int>(get_u32(is));

    Vocabulary& v = ck.vocab;
    const std::uint32_t nw = get_u32(is);
    for (std::uint32_t i = 0; i < nw; ++i) {
        v.words.push_back(get_str(is));
        v.word_index[v.words.back()] = static_cast<int>(i);
    }
    const std::uint32_t nc = get_u32(is);
    v.chars.resize(nc);
    is.read(v.chars.data(), nc);
    for (std::uint32_t i = 2; i < nc; ++i)
        v.char_index[v.chars[i]] = static_cast<int>(i);
    const std::uint32_t np = get_u32(is);
    for (std::uint32_t i = 0; i < np; ++i) {
        v.pos_tags.push_back(get_str(is));
        v.pos_index[v.pos_tags.back()] = static_cast<int>(i);
    }

    ck.model.n_words = static_cast<int>(nw);
    ck.model.n_chars = static_cast<int>(nc);
    ck.model.n_pos = static_cast<int>(np);

    const std::uint32_t nt = get_u32(is);
    for (std::uint32_t i = 0; i < nt; ++i) {
        const std::string name = get_str(is);
        const std::uint32_t rank = get_u32(is);
        std::vector<std::size_t> shape;
        for (std::uint32_t r = 0; r < rank; ++r)
            shape.push_back(static_cast<std::size_t>(get_u64(is)));
        Tensor<float> t = Tensor<float>::zeros(shape);
        for (float& x : t.data) x = get_f32(is);
        ck.model.params.add(name, std::move(t));
    }
    if (!is) throw ValidationError("checkpoint: truncated file");
    return ck;
}

}  // namespace reapp
