#include "reapp/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace reapp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        const int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key +
                              "' expects an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key +
                              "' expects a number, got '" + v + "'");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section != "paths" && section != "model" && section != "train")
                throw ValidationError(origin + ":" + std::to_string(lineno) +
                                      ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;

        if (full == "paths.train") cfg.train_path = val;
        else if (full == "paths.dev") cfg.dev_path = val;
        else if (full == "paths.test") cfg.test_path = val;
        else if (full == "paths.vectors") cfg.vectors_path = val;
        else if (full == "paths.checkpoint") cfg.checkpoint_path = val;
        else if (full == "model.word_dim") cfg.model.word_dim = to_int(full, val);
        else if (full == "model.char_emb_dim")
            cfg.model.char_emb_dim = to_int(full, val);
        else if (full == "model.char_filters")
            cfg.model.char_filters = to_int(full, val);
        else if (full == "model.pos_dim") cfg.model.pos_dim = to_int(full, val);
        else if (full == "model.hidden") cfg.model.hidden = to_int(full, val);
        else if (full == "model.enc_layers")
            cfg.model.enc_layers = to_int(full, val);
        else if (full == "train.lr") cfg.train.lr = to_double(full, val);
        else if (full == "train.batch_size")
            cfg.train.batch_size = to_int(full, val);
        else if (full == "train.dropout")
            cfg.train.dropout = to_double(full, val);
        else if (full == "train.max_epochs")
            cfg.train.max_epochs = to_int(full, val);
        else if (full == "train.patience")
            cfg.train.patience = to_int(full, val);
        else if (full == "train.seed")
            cfg.train.seed = static_cast<std::uint64_t>(to_int(full, val));
        else if (full == "train.clip_norm")
            cfg.train.clip_norm = to_double(full, val);
        else if (full == "train.max_aspects")
            cfg.train.max_aspects = to_int(full, val);
        else if (full == "train.min_word_freq")
            cfg.min_word_freq = to_int(full, val);
        else
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": unknown key '" + full + "'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void RunConfig::validate_for_training() const {
    model.validate();
    train.validate();
    if (min_word_freq < 1)
        throw ValidationError("config: train.min_word_freq must be >= 1");
    if (train_path.empty())
        throw ValidationError("config: paths.train is required");
    for (const auto& [name, p] :
         std::initializer_list<std::pair<const char*, const std::string*>>{
             {"paths.train", &train_path},
             {"paths.dev", &dev_path},
             {"paths.test", &test_path},
             {"paths.vectors", &vectors_path}}) {
        if (!p->empty() && !std::filesystem::exists(*p))
            throw ValidationError("config: " + std::string(name) +
                                  " does not exist: " + *p);
    }
}

}  // namespace reapp
