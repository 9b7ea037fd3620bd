#pragma once

#include <cstdint>

#include "salieval/corpus.hpp"

namespace salieval {

// Synthetic base-corpus generator. Each class owns `class_word_count`
// discriminative tokens; a token is drawn from the label's class words with
// probability `class_skew`, otherwise uniformly from the whole content
// vocabulary. class_skew = 0 therefore yields a corpus with no learnable
// signal.
struct GeneratorConfig {
  int vocab_size = 500;  // content words, excluding the reserved specials
  int class_word_count = 50;
  int length_min = 10;
  int length_max = 40;
  double class_skew = 0.6;
  double balance = 0.5;  // positive-class rate
  int train_size = 3000;
  int validation_size = 500;
  int test_size = 1000;
  uint64_t seed = 1;

  void validate() const;
};

Corpus generate_base_corpus(const GeneratorConfig& cfg);

}  // namespace salieval
