#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "reapp/model.hpp"
#include "reapp/train.hpp"

namespace reapp {

// Everything a run needs, read from a flat key=value file with [section]
// headers. Defaults are the standard configuration; any key may be
// overridden.
struct RunConfig {
    // [paths]
    std::string train_path;
    std::string dev_path;
    std::string test_path;
    std::string vectors_path;     // optional pretrained word vectors
    std::string checkpoint_path;  // output of `train`

    // [model]
    ModelConfig model;

    // [train]
    TrainConfig train;
    int min_word_freq = 1;

    void validate_for_training() const;
};

RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

}  // namespace reapp
