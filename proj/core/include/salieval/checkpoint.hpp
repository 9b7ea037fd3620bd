#pragma once

#include <filesystem>
#include <string>

#include "salieval/model.hpp"

namespace salieval {

struct CheckpointMeta {
  double val_acc = 0.0;
  int step = 0;
};

// Binary checkpoint: magic + version tag, a JSON header describing config,
// vocabulary and parameter layout, then raw little-endian f64 blobs. Loading
// reproduces the model exactly.
void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model,
                     const CheckpointMeta& meta);

struct LoadedCheckpoint {
  TrainedModel model;
  CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace salieval
