#pragma once

#include <string>

#include "stlflow/nn/flow.hpp"

namespace stlflow::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One JSON header line (config, normalization, epoch, parameter shapes)
// followed by the raw little-endian double parameter block. A loaded model
// reproduces the saved model's outputs exactly.
void save_checkpoint(const FlowModel &model, const std::string &path);
FlowModel load_checkpoint(const std::string &path);

}  // namespace stlflow::nn
