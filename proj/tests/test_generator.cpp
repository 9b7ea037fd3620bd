#include "doctest.h"
#include "salieval/generator.hpp"

using namespace salieval;

namespace {

GeneratorConfig small_config() {
  GeneratorConfig cfg;
  cfg.vocab_size = 120;
  cfg.class_word_count = 20;
  cfg.length_min = 5;
  cfg.length_max = 15;
  cfg.train_size = 1000;
  cfg.validation_size = 100;
  cfg.test_size = 100;
  cfg.seed = 4242;
  return cfg;
}

}  // namespace

TEST_CASE("label balance concentrates around the configured rate") {
  GeneratorConfig cfg = small_config();
  cfg.balance = 0.5;
  const Corpus c = generate_base_corpus(cfg);
  int positives = 0;
  for (const Example& ex : c.train) positives += ex.label;
  const double rate = static_cast<double>(positives) / static_cast<double>(c.train.size());
  CHECK(rate > 0.45);
  CHECK(rate < 0.55);
}

TEST_CASE("lengths respect the configured range") {
  const GeneratorConfig cfg = small_config();
  const Corpus c = generate_base_corpus(cfg);
  for (const Example& ex : c.train) {
    CHECK(ex.content_length() >= cfg.length_min);
    CHECK(ex.content_length() <= cfg.length_max);
  }
}

TEST_CASE("same seed gives identical corpora, different seeds differ") {
  const GeneratorConfig cfg = small_config();
  const Corpus a = generate_base_corpus(cfg);
  const Corpus b = generate_base_corpus(cfg);
  REQUIRE(a.train.size() == b.train.size());
  for (size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].tokens == b.train[i].tokens);
    CHECK(a.train[i].label == b.train[i].label);
  }
  GeneratorConfig other = cfg;
  other.seed = cfg.seed + 1;
  const Corpus c = generate_base_corpus(other);
  bool any_difference = false;
  for (size_t i = 0; i < a.train.size() && !any_difference; ++i)
    any_difference = a.train[i].tokens != c.train[i].tokens;
  CHECK(any_difference);
}

TEST_CASE("class-skewed tokens are class-conditional") {
  GeneratorConfig cfg = small_config();
  cfg.class_skew = 0.8;
  const Corpus c = generate_base_corpus(cfg);
  // Class-0 words occupy ids [base, base+cw); class-1 words the next block.
  const int base = Vocab::kNumSpecials;
  int class0_in_label0 = 0, class1_in_label0 = 0;
  for (const Example& ex : c.train) {
    if (ex.label != 0) continue;
    for (int t : ex.tokens) {
      if (t >= base && t < base + cfg.class_word_count) ++class0_in_label0;
      if (t >= base + cfg.class_word_count && t < base + 2 * cfg.class_word_count)
        ++class1_in_label0;
    }
  }
  CHECK(class0_in_label0 > 5 * class1_in_label0);
}

TEST_CASE("skew zero produces no class-conditional counts") {
  GeneratorConfig cfg = small_config();
  cfg.class_skew = 0.0;
  const Corpus c = generate_base_corpus(cfg);
  const int base = Vocab::kNumSpecials;
  int64_t class0_in_label0 = 0, class0_in_label1 = 0, n0 = 0, n1 = 0;
  for (const Example& ex : c.train) {
    for (int t : ex.tokens)
      if (t >= base && t < base + cfg.class_word_count)
        (ex.label == 0 ? class0_in_label0 : class0_in_label1)++;
    (ex.label == 0 ? n0 : n1) += ex.content_length();
  }
  const double f0 = static_cast<double>(class0_in_label0) / static_cast<double>(n0);
  const double f1 = static_cast<double>(class0_in_label1) / static_cast<double>(n1);
  CHECK(std::abs(f0 - f1) < 0.05);  // both near cw/vocab with no label signal
}

TEST_CASE("config invariants") {
  GeneratorConfig cfg = small_config();
  cfg.vocab_size = 2 * cfg.class_word_count;  // must strictly exceed
  CHECK_THROWS_AS(generate_base_corpus(cfg), ValidationError);
  cfg = small_config();
  cfg.length_min = 2;
  CHECK_THROWS_AS(generate_base_corpus(cfg), ValidationError);
}
