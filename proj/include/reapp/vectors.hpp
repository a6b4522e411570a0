#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "reapp/corpus.hpp"
#include "reapp/tensor.hpp"

namespace reapp {

// Reads whitespace-separated "token v1 ... vD" lines and overwrites the
// word-table rows of in-vocabulary tokens. Tokens absent from the file keep
// their random initialization. Returns the number of rows filled.
template <typename T>
std::size_t load_pretrained_vectors(const std::string& path,
                                    const Vocabulary& vocab,
                                    Tensor<T>& word_table) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open vector file: " + path);
    const std::size_t dim = word_table.cols();
    std::string line;
    std::size_t filled = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        auto it = vocab.word_index.find(token);
        if (it == vocab.word_index.end()) continue;
        T* row = word_table.row_ptr(static_cast<std::size_t>(it->second));
        for (std::size_t d = 0; d < dim; ++d) {
            double v;
            if (!(ls >> v))
                throw ValidationError(path + ":" + std::to_string(lineno) +
                                      ": expected " + std::to_string(dim) +
                                      " values for token '" + token + "'");
            row[d] = static_cast<T>(v);
        }
        ++filled;
    }
    return filled;
}

}  // namespace reapp
