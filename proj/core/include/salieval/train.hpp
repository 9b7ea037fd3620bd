#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salieval/model.hpp"

namespace salieval {

enum class Optimizer { kSgdMomentum, kAdam };

std::string optimizer_name(Optimizer o);
Optimizer optimizer_from_name(std::string_view name);

struct TrainConfig {
  Optimizer optimizer = Optimizer::kSgdMomentum;
  double learning_rate = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-6;
  int batch_size = 32;
  int max_steps = 1200;
  int patience = 500;    // steps without validation improvement before stopping
  int eval_every = 50;   // validation cadence, in steps
  uint64_t seed = 1;

  void validate() const;
  static TrainConfig defaults(Arch arch);
};

struct TrainHistoryEntry {
  int step = 0;
  double loss = 0.0;  // mean BCE since the previous evaluation
  double val_acc = 0.0;
};

struct TrainResult {
  TrainedModel model;
  std::vector<TrainHistoryEntry> history;
  double best_val_acc = 0.0;
  int best_step = 0;
};

// Minimizes binary cross-entropy on sigmoid(logit) over the train split,
// early-stops on validation accuracy, and returns the best checkpoint.
// Throws TrainingError naming the step if the loss goes non-finite.
TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const Corpus& corpus);

void save_history_csv(const std::string& path, const std::vector<TrainHistoryEntry>& history);

}  // namespace salieval
