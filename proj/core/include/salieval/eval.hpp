#pragma once

#include "salieval/lime.hpp"
#include "salieval/metrics.hpp"
#include "salieval/shortcut.hpp"

namespace salieval {

struct VerifyThresholds {
  double min_shortcut_acc = 0.99;
  double chance_center = 0.5;
  double chance_band = 0.05;
};

// Outcome of the two ground-truth verification tests: the shortcut-trained
// model must be near-perfect on the fully synthetic test set, and the
// clean-trained model must sit at chance on the same set. Ground truth is
// only meaningful when both hold.
struct VerificationOutcome {
  double shortcut_model_acc = 0.0;
  double clean_model_acc = 0.0;
  bool test1_passed = false;
  bool test2_passed = false;
  bool passed = false;
  std::string summary;  // accuracies to 3 decimals, names the failed test
};

// `test_vocab` maps the synthetic-test token ids; each model may use its own
// vocabulary (the clean model lacks the indicators, which remap to UNK).
VerificationOutcome verify_models(const Classifier& shortcut_model,
                                  const Classifier& clean_model,
                                  const std::vector<Example>& synthetic_test,
                                  const Vocab& test_vocab,
                                  const VerifyThresholds& thresholds = {});

struct EvalOptions {
  int max_examples = 0;  // 0 = all
  bool keep_records = false;
};

struct MethodEvalResult {
  MethodConfig cfg;
  double precision = 0.0;
  double mean_rank = 0.0;
  int n = 0;
  bool failed = false;
  std::string note;  // failure reason or per-method remarks
  std::vector<EvalRecord> records;  // populated when keep_records is set
};

// Runs every configured method over the synthetic test set and computes both
// metrics. Configurations that can share work do: all grad/gxi variants reuse
// one gradient per example, IG configs whose step counts nest reuse one
// interpolation sweep per baseline, and LIME configs with the same masking
// setup reuse perturbation forward passes (smaller runs are prefixes of
// larger ones, so shared and standalone results are identical).
std::vector<MethodEvalResult> evaluate_methods(const Classifier& model,
                                               const std::vector<Example>& synthetic_test,
                                               const std::vector<MethodConfig>& configs,
                                               const EvalOptions& options = {});

MethodEvalResult evaluate_method(const Classifier& model,
                                 const std::vector<Example>& synthetic_test,
                                 const MethodConfig& config, const EvalOptions& options = {});

}  // namespace salieval
