#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "salieval/vocab.hpp"

namespace salieval {

enum class Provenance { kOriginal, kSyntheticShortcut, kDistractor };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(std::string_view name);

// One classification instance. Tokens are framed: tokens.front() == BOS,
// tokens.back() == EOS. gt_positions index into the framed sequence and are
// non-empty only for synthetic-shortcut examples.
struct Example {
  int id = 0;
  std::vector<int> tokens;
  int label = 0;
  Provenance provenance = Provenance::kOriginal;
  std::vector<int> gt_positions;

  int content_length() const { return static_cast<int>(tokens.size()) - 2; }
};

enum class Split { kTrain, kValidation, kTest };

struct Corpus {
  Vocab vocab;
  std::vector<Example> train;
  std::vector<Example> validation;
  std::vector<Example> test;

  std::vector<Example>& split(Split s);
  const std::vector<Example>& split(Split s) const;

  // Throws ValidationError if any invariant is broken: empty train split,
  // label outside {0,1}, token id outside the vocab, framed sequences missing
  // BOS/EOS, gt positions out of range, or train/test sequence overlap.
  void validate() const;
};

enum class CorpusFormat { kJsonl, kTsv };

CorpusFormat corpus_format_from_name(std::string_view name);

// Loads a corpus from a directory holding train.<ext> plus optional
// validation.<ext> and test.<ext>. The vocabulary is built from the train
// split in first-occurrence order; out-of-vocabulary tokens elsewhere map to
// UNK. Every example is framed with BOS/EOS.
Corpus load_corpus(const std::filesystem::path& dir, CorpusFormat format);

// Loads one split file against an existing vocabulary (used for the fully
// synthetic test set).
std::vector<Example> load_examples(const std::filesystem::path& file, CorpusFormat format,
                                   const Vocab& vocab);

// Writers emit one record per line: text, label, and (when not original)
// provenance and content-relative gt_positions.
void save_examples(const std::filesystem::path& file, const std::vector<Example>& examples,
                   const Vocab& vocab);
void save_corpus(const std::filesystem::path& dir, const Corpus& corpus);

// Detokenized content (BOS/EOS stripped, space-joined).
std::string example_text(const Example& ex, const Vocab& vocab);

// Token-id sequence translated between vocabularies via token strings;
// strings missing from `to` become UNK.
std::vector<int> remap_tokens(const std::vector<int>& tokens, const Vocab& from, const Vocab& to);

}  // namespace salieval
