#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "salieval/eval.hpp"
#include "salieval/generator.hpp"
#include "salieval/train.hpp"

namespace salieval {

struct CorpusSource {
  bool use_generator = true;
  GeneratorConfig generator;
  std::filesystem::path path;  // directory with train/validation/test files
  CorpusFormat format = CorpusFormat::kJsonl;
};

struct ModelEntry {
  ModelConfig model;
  TrainConfig training;
};

struct EvaluationSettings {
  int max_examples = 0;  // 0 = whole synthetic test set
  bool dump_salience = false;
};

// One experiment: corpus source, one shortcut, injection settings, one or
// both architectures, and the method matrix. Parsed from a versioned JSON
// file; unknown keys are rejected so a typo cannot silently change a run.
// Sub-seeds (injection, per-model training, salience) derive from the single
// run seed unless a section pins its own.
struct RunConfig {
  uint64_t seed = 1;
  std::filesystem::path output_dir;
  CorpusSource corpus;
  ShortcutSpec shortcut;
  InjectionConfig injection;
  std::vector<ModelEntry> models;
  std::vector<MethodConfig> methods;
  EvaluationSettings evaluation;

  void validate() const;
  nlohmann::json to_json() const;

  // Accepts either a config file or a manifest file (the manifest embeds the
  // config it was produced from).
  static RunConfig from_json_file(const std::filesystem::path& path);
  static RunConfig from_json(const nlohmann::json& j);
};

// The paper-style evaluation matrix: 6 grad variants, 2 gxi variants, the
// 8 IG configurations ({logit,prob} x {zero,unk} x {100,1000}), LIME with
// unk x {100,1000,3000} plus mask x 3000, and the random baseline.
std::vector<MethodConfig> standard_method_matrix(uint64_t salience_seed);

}  // namespace salieval
