#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "salieval/corpus.hpp"
#include "salieval/rng.hpp"

namespace salieval {

// st:  one indicator token; its identity sets the label.
// tic: an indicator sets the label only when the context token is present too.
// op:  both indicators present; whichever comes first sets the label
//      (indicator0 first -> 0, indicator1 first -> 1).
enum class ShortcutKind { kSt, kTic, kOp };

std::string shortcut_kind_name(ShortcutKind k);
ShortcutKind shortcut_kind_from_name(std::string_view name);

struct ShortcutSpec {
  ShortcutKind kind = ShortcutKind::kSt;
  std::string indicator0 = "zerotok";
  std::string indicator1 = "onetok";
  std::string context_token;  // tic only
  int k = 1;

  void validate() const;
  static ShortcutSpec make(ShortcutKind kind);
};

struct InjectionConfig {
  double synthetic_fraction = 0.25;
  double distractor_fraction = 0.25;
  int synthetic_test_size = 500;
  uint64_t seed = 1;

  void validate() const;
};

// Builds a shortcut example from `base`: samples the label (hence, for op,
// the token order) uniformly, inserts the indicator tokens at uniformly
// chosen interior positions, and sets the label from the shortcut rule.
// gt_positions records every inserted position.
Example make_synthetic_example(const Example& base, const ShortcutSpec& spec, const Vocab& vocab,
                               Rng& rng);

// Same, with the label fixed by the caller (injection balances labels 50/50).
Example make_synthetic_example_with_label(const Example& base, const ShortcutSpec& spec,
                                          const Vocab& vocab, int label, Rng& rng);

// Inserts exactly one indicator token without touching the label. The token
// is chosen uniformly; a tic distractor never carries the context token and
// an op distractor never completes the pair, so the shortcut rule stays
// unambiguous.
Example inject_distractor(const Example& base, const ShortcutSpec& spec, const Vocab& vocab,
                          Rng& rng);

struct InjectionResult {
  Corpus mixed;
  std::vector<Example> synthetic_test;
};

// Protocol augmentation step: appends the shortcut tokens to the vocabulary,
// rewrites `synthetic_fraction` of train/validation into shortcut examples
// and `distractor_fraction` into distractor examples (labels of the synthetic
// portion balanced 50/50), leaves the test split untouched, and builds a
// fully synthetic test set of `synthetic_test_size` shortcut examples drawn
// from test-split instances.
//
// st is the one kind whose pattern a single inserted token would already
// complete, so distractor rewriting is skipped for it; anything else would
// plant counterexamples to the rule.
InjectionResult inject_shortcuts(const Corpus& corpus, const ShortcutSpec& spec,
                                 const InjectionConfig& cfg);

// Label the shortcut rule assigns to this token sequence, or nullopt when the
// pattern is absent or ambiguous.
std::optional<int> shortcut_rule_label(const std::vector<int>& tokens, const ShortcutSpec& spec,
                                       const Vocab& vocab);

// Number of examples whose active shortcut pattern disagrees with their label.
int count_counterexamples(const Corpus& corpus, const ShortcutSpec& spec);

// Number of distractor examples that accidentally satisfy the full pattern.
int count_impure_distractors(const Corpus& corpus, const ShortcutSpec& spec);

}  // namespace salieval
