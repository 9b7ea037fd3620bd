#pragma once

#include "salieval/checkpoint.hpp"
#include "salieval/run_config.hpp"

namespace salieval {

// File layout of one run directory.
struct RunPaths {
  explicit RunPaths(const std::filesystem::path& root);

  std::filesystem::path root;
  std::filesystem::path manifest;
  std::filesystem::path original_dir;
  std::filesystem::path mixed_dir;
  std::filesystem::path synthetic_test;
  std::filesystem::path verification;
  std::filesystem::path eval_csv;
  std::filesystem::path eval_md;
  std::filesystem::path eval_log;

  std::filesystem::path checkpoint(Arch arch, bool shortcut_model) const;
  std::filesystem::path history(Arch arch, bool shortcut_model) const;
  std::filesystem::path salience_dump(Arch arch, const std::string& method_id) const;
};

// Stage 1-2: obtain the base corpus, inject the shortcut, write the original
// and mixed corpora, the fully synthetic test set, and the manifest.
void run_inject(const RunConfig& cfg);

// Stage 3: train, per architecture, model A on the mixed corpus and model B
// on the original corpus; write checkpoints and training histories.
void run_train(const RunConfig& cfg);

struct ArchVerification {
  std::string arch;
  VerificationOutcome outcome;
  double shortcut_model_original_test_acc = 0.0;
  double clean_model_original_test_acc = 0.0;
};

struct VerificationReport {
  std::vector<ArchVerification> per_arch;
  bool passed = false;
};

// Stage 4: the two ground-truth tests per architecture. Writes
// verification.json; the caller decides whether a failure is fatal.
VerificationReport run_verify(const RunConfig& cfg);

// Stages 5-6: the method matrix over the synthetic test set, evaluated on
// the shortcut-trained models. Requires a passed verification report on disk;
// a method failure skips that method with a logged reason. Writes the CSV and
// Markdown reports (plus optional per-example salience dumps).
void run_evaluate(const RunConfig& cfg, const std::string& method_filter = "");

// All stages in order, stopping at the first failure.
void run_all(const RunConfig& cfg, const std::string& method_filter = "");

// Regenerates the Markdown report from the CSV on disk and returns it.
std::string run_report(const RunConfig& cfg);

// Methods whose id contains any of the comma-separated needles (empty filter
// keeps everything).
std::vector<MethodConfig> filter_methods(const std::vector<MethodConfig>& methods,
                                         const std::string& filter);

}  // namespace salieval
