#pragma once

#include <string>

#include "reapp/corpus.hpp"
#include "reapp/model.hpp"

namespace reapp {

struct Checkpoint {
    Model<float> model;
    Vocabulary vocab;
};

// Self-describing binary container: magic + version, model dimensions,
// vocabulary lists in id order, then name -> shape -> little-endian f32
// data per parameter.
void save_checkpoint(const std::string& path, const Model<float>& model,
                     const Vocabulary& vocab);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace reapp
