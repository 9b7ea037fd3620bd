#include "salieval/generator.hpp"

#include <cstdio>
#include <set>

#include "salieval/rng.hpp"

namespace salieval {

void GeneratorConfig::validate() const {
  if (vocab_size <= 2 * class_word_count)
    throw ValidationError("generator: vocab_size must exceed 2*class_word_count");
  if (class_word_count <= 0) throw ValidationError("generator: class_word_count must be positive");
  if (length_min < 3) throw ValidationError("generator: length_min must be >= 3");
  if (length_max < length_min) throw ValidationError("generator: length_max < length_min");
  if (class_skew < 0.0 || class_skew > 1.0)
    throw ValidationError("generator: class_skew must be in [0,1]");
  if (balance < 0.0 || balance > 1.0) throw ValidationError("generator: balance must be in [0,1]");
  if (train_size <= 0) throw ValidationError("generator: train_size must be positive");
  if (validation_size < 0 || test_size < 0)
    throw ValidationError("generator: split sizes must be non-negative");
}

namespace {

std::string word_name(int i, int class_word_count) {
  char buf[16];
  if (i < class_word_count)
    std::snprintf(buf, sizeof(buf), "a%03d", i);
  else if (i < 2 * class_word_count)
    std::snprintf(buf, sizeof(buf), "b%03d", i - class_word_count);
  else
    std::snprintf(buf, sizeof(buf), "w%04d", i - 2 * class_word_count);
  return buf;
}

}  // namespace

Corpus generate_base_corpus(const GeneratorConfig& cfg) {
  cfg.validate();
  Corpus corpus;
  // Content ids are contiguous after the specials: class-0 words, class-1
  // words, then background words.
  const int base = corpus.vocab.size();
  for (int i = 0; i < cfg.vocab_size; ++i) corpus.vocab.add(word_name(i, cfg.class_word_count));

  Rng rng(mix_seed(cfg.seed, "generate"));
  std::set<std::vector<int>> seen;  // across all splits; keeps test disjoint from train

  auto draw_example = [&](int id, int label) {
    Example ex;
    ex.id = id;
    ex.label = label;
    const int len = static_cast<int>(rng.uniform_int(cfg.length_min, cfg.length_max));
    ex.tokens.reserve(static_cast<size_t>(len) + 2);
    ex.tokens.push_back(Vocab::kBos);
    const int class_base = base + label * cfg.class_word_count;
    for (int i = 0; i < len; ++i) {
      if (rng.uniform() < cfg.class_skew) {
        ex.tokens.push_back(class_base +
                            static_cast<int>(rng.uniform_int(0, cfg.class_word_count - 1)));
      } else {
        ex.tokens.push_back(base + static_cast<int>(rng.uniform_int(0, cfg.vocab_size - 1)));
      }
    }
    ex.tokens.push_back(Vocab::kEos);
    return ex;
  };

  auto fill_split = [&](std::vector<Example>& out, int size) {
    out.reserve(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) {
      const int label = rng.bernoulli(cfg.balance) ? 1 : 0;
      for (int attempt = 0;; ++attempt) {
        Example ex = draw_example(i, label);
        if (seen.insert(ex.tokens).second) {
          out.push_back(std::move(ex));
          break;
        }
        if (attempt > 100)
          throw ValidationError("generator: cannot produce distinct examples; "
                                "vocab or length range too small");
      }
    }
  };

  fill_split(corpus.train, cfg.train_size);
  fill_split(corpus.validation, cfg.validation_size);
  fill_split(corpus.test, cfg.test_size);
  corpus.validate();
  return corpus;
}

}  // namespace salieval
