#include <algorithm>

#include "doctest.h"
#include "salieval/generator.hpp"
#include "salieval/shortcut.hpp"

using namespace salieval;

namespace {

Corpus tiny_corpus() {
  GeneratorConfig cfg;
  cfg.vocab_size = 80;
  cfg.class_word_count = 10;
  cfg.length_min = 4;
  cfg.length_max = 10;
  cfg.train_size = 400;
  cfg.validation_size = 80;
  cfg.test_size = 120;
  cfg.seed = 99;
  return generate_base_corpus(cfg);
}

Example base_example(Vocab& vocab, int n_content, int label = 0) {
  Example ex;
  ex.label = label;
  ex.tokens.push_back(Vocab::kBos);
  for (int i = 0; i < n_content; ++i)
    ex.tokens.push_back(vocab.add("tok" + std::to_string(i)));
  ex.tokens.push_back(Vocab::kEos);
  return ex;
}

int find_token(const std::vector<int>& tokens, int id) {
  const auto it = std::find(tokens.begin(), tokens.end(), id);
  return it == tokens.end() ? -1 : static_cast<int>(it - tokens.begin());
}

}  // namespace

TEST_CASE("ordered-pair example follows the order rule") {
  Vocab vocab;
  Example base = base_example(vocab, 6);
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kOp);
  const int i0 = vocab.add(spec.indicator0);
  const int i1 = vocab.add(spec.indicator1);
  Rng rng(21);
  int seen_zero = 0, seen_one = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Example ex = make_synthetic_example(base, spec, vocab, rng);
    const int p0 = find_token(ex.tokens, i0);
    const int p1 = find_token(ex.tokens, i1);
    REQUIRE(p0 >= 0);
    REQUIRE(p1 >= 0);
    CHECK(ex.label == (p0 < p1 ? 0 : 1));
    CHECK(ex.provenance == Provenance::kSyntheticShortcut);
    REQUIRE(ex.gt_positions.size() == 2);
    CHECK(((ex.gt_positions[0] == std::min(p0, p1)) && (ex.gt_positions[1] == std::max(p0, p1))));
    (ex.label == 0 ? seen_zero : seen_one)++;
  }
  CHECK(seen_zero > 50);  // order drawn uniformly
  CHECK(seen_one > 50);
}

TEST_CASE("single-token example takes the indicator's class regardless of the base label") {
  Vocab vocab;
  Example base = base_example(vocab, 5, /*label=*/0);
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kSt);
  const int i1 = vocab.add(spec.indicator1);
  vocab.add(spec.indicator0);
  Rng rng(5);
  const Example ex = make_synthetic_example_with_label(base, spec, vocab, 1, rng);
  CHECK(ex.label == 1);
  CHECK(find_token(ex.tokens, i1) > 0);
  CHECK(ex.gt_positions.size() == 1);
  CHECK(ex.gt_positions[0] == find_token(ex.tokens, i1));
}

TEST_CASE("token-in-context records indicator and context positions") {
  Vocab vocab;
  Example base = base_example(vocab, 6);
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kTic);
  const int i1 = vocab.add(spec.indicator1);
  vocab.add(spec.indicator0);
  const int ctx = vocab.add(spec.context_token);
  Rng rng(31);
  const Example ex = make_synthetic_example_with_label(base, spec, vocab, 1, rng);
  CHECK(ex.label == 1);
  const int pi = find_token(ex.tokens, i1);
  const int pc = find_token(ex.tokens, ctx);
  REQUIRE(pi > 0);
  REQUIRE(pc > 0);
  std::vector<int> expected = {std::min(pi, pc), std::max(pi, pc)};
  CHECK(ex.gt_positions == expected);
}

TEST_CASE("insertions never land on the BOS or EOS slots") {
  Vocab vocab;
  Example base = base_example(vocab, 3);
  for (ShortcutKind kind : {ShortcutKind::kSt, ShortcutKind::kTic, ShortcutKind::kOp}) {
    ShortcutSpec spec = ShortcutSpec::make(kind);
    vocab.add(spec.indicator0);
    vocab.add(spec.indicator1);
    if (kind == ShortcutKind::kTic) vocab.add(spec.context_token);
    Rng rng(hash_tag(shortcut_kind_name(kind)));
    for (int trial = 0; trial < 300; ++trial) {
      const Example ex = make_synthetic_example(base, spec, vocab, rng);
      CHECK(ex.tokens.front() == Vocab::kBos);
      CHECK(ex.tokens.back() == Vocab::kEos);
      for (int p : ex.gt_positions) {
        CHECK(p >= 1);
        CHECK(p < static_cast<int>(ex.tokens.size()) - 1);
      }
    }
  }
}

TEST_CASE("distractors keep the label and never complete the pattern") {
  Vocab vocab;
  Example base = base_example(vocab, 6, /*label=*/1);

  SUBCASE("tic distractor lacks the context token") {
    ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kTic);
    const int i0 = vocab.add(spec.indicator0);
    const int i1 = vocab.add(spec.indicator1);
    const int ctx = vocab.add(spec.context_token);
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
      const Example ex = inject_distractor(base, spec, vocab, rng);
      CHECK(ex.label == 1);
      CHECK(ex.provenance == Provenance::kDistractor);
      CHECK(ex.gt_positions.empty());
      CHECK(find_token(ex.tokens, ctx) == -1);
      const bool has0 = find_token(ex.tokens, i0) >= 0;
      const bool has1 = find_token(ex.tokens, i1) >= 0;
      CHECK(has0 != has1);  // exactly one indicator
      CHECK_FALSE(shortcut_rule_label(ex.tokens, spec, vocab).has_value());
    }
  }
  SUBCASE("op distractor carries exactly one indicator") {
    ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kOp);
    const int i0 = vocab.add(spec.indicator0);
    const int i1 = vocab.add(spec.indicator1);
    Rng rng(78);
    for (int trial = 0; trial < 100; ++trial) {
      const Example ex = inject_distractor(base, spec, vocab, rng);
      CHECK(ex.label == 1);
      const bool has0 = find_token(ex.tokens, i0) >= 0;
      const bool has1 = find_token(ex.tokens, i1) >= 0;
      CHECK(has0 != has1);
      CHECK_FALSE(shortcut_rule_label(ex.tokens, spec, vocab).has_value());
    }
  }
  SUBCASE("base label 1 plus indicator0 keeps label 1") {
    ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kOp);
    vocab.add(spec.indicator0);
    vocab.add(spec.indicator1);
    for (uint64_t s = 0; s < 20; ++s) {
      Rng rng(s);
      CHECK(inject_distractor(base, spec, vocab, rng).label == 1);
    }
  }
}

TEST_CASE("inject_shortcuts builds the mixed corpus and the synthetic test set") {
  const Corpus corpus = tiny_corpus();
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kOp);
  InjectionConfig cfg;
  cfg.synthetic_fraction = 0.25;
  cfg.distractor_fraction = 0.25;
  cfg.synthetic_test_size = 200;
  cfg.seed = 7;

  const InjectionResult result = inject_shortcuts(corpus, spec, cfg);

  SUBCASE("counts follow the fractions") {
    int synthetic = 0, distractor = 0;
    for (const Example& ex : result.mixed.train) {
      synthetic += ex.provenance == Provenance::kSyntheticShortcut;
      distractor += ex.provenance == Provenance::kDistractor;
    }
    CHECK(synthetic == 100);  // 0.25 * 400
    CHECK(distractor == 100);
  }
  SUBCASE("synthetic labels are balanced exactly") {
    int pos = 0, total = 0;
    for (const Example& ex : result.mixed.train) {
      if (ex.provenance != Provenance::kSyntheticShortcut) continue;
      pos += ex.label;
      ++total;
    }
    CHECK(total == 100);
    CHECK(pos == 50);
  }
  SUBCASE("the synthetic test set is fully synthetic with |gt| = k") {
    CHECK(result.synthetic_test.size() == 200);
    const int i0 = result.mixed.vocab.require(spec.indicator0);
    const int i1 = result.mixed.vocab.require(spec.indicator1);
    for (const Example& ex : result.synthetic_test) {
      CHECK(ex.provenance == Provenance::kSyntheticShortcut);
      CHECK(static_cast<int>(ex.gt_positions.size()) == spec.k);
      const int p0 = find_token(ex.tokens, i0);
      const int p1 = find_token(ex.tokens, i1);
      CHECK(ex.label == (p0 < p1 ? 0 : 1));  // order rule, all 200 examples
    }
  }
  SUBCASE("no counterexamples and pure distractors") {
    CHECK(count_counterexamples(result.mixed, spec) == 0);
    CHECK(count_impure_distractors(result.mixed, spec) == 0);
  }
  SUBCASE("synthetic labels are re-derivable from the tokens alone") {
    for (const Example& ex : result.mixed.train) {
      if (ex.provenance != Provenance::kSyntheticShortcut) continue;
      const auto rule = shortcut_rule_label(ex.tokens, spec, result.mixed.vocab);
      REQUIRE(rule.has_value());
      CHECK(*rule == ex.label);
    }
  }
  SUBCASE("deterministic under the seed") {
    const InjectionResult again = inject_shortcuts(corpus, spec, cfg);
    REQUIRE(again.mixed.train.size() == result.mixed.train.size());
    for (size_t i = 0; i < result.mixed.train.size(); ++i)
      CHECK(again.mixed.train[i].tokens == result.mixed.train[i].tokens);
    for (size_t i = 0; i < result.synthetic_test.size(); ++i)
      CHECK(again.synthetic_test[i].tokens == result.synthetic_test[i].tokens);
  }
  SUBCASE("test split of the mixed corpus stays original") {
    for (const Example& ex : result.mixed.test)
      CHECK(ex.provenance == Provenance::kOriginal);
  }
}

TEST_CASE("st injection skips distractors so the rule stays counterexample-free") {
  const Corpus corpus = tiny_corpus();
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kSt);
  InjectionConfig cfg;
  cfg.synthetic_test_size = 100;
  cfg.seed = 8;
  const InjectionResult result = inject_shortcuts(corpus, spec, cfg);
  int distractors = 0;
  for (const Example& ex : result.mixed.train)
    distractors += ex.provenance == Provenance::kDistractor;
  CHECK(distractors == 0);
  CHECK(count_counterexamples(result.mixed, spec) == 0);
}

TEST_CASE("indicator already in the vocabulary is a conflict") {
  Corpus corpus = tiny_corpus();
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kOp);
  spec.indicator0 = "a000";  // generator vocabulary word
  InjectionConfig cfg;
  CHECK_THROWS_AS(inject_shortcuts(corpus, spec, cfg), ConflictError);
}

TEST_CASE("spec invariants") {
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kSt);
  spec.k = 2;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = ShortcutSpec::make(ShortcutKind::kTic);
  spec.context_token.clear();
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  InjectionConfig cfg;
  cfg.synthetic_fraction = 0.7;
  cfg.distractor_fraction = 0.7;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("injection into an example with no content tokens fails") {
  Vocab vocab;
  Example empty;
  empty.tokens = {Vocab::kBos, Vocab::kEos};
  ShortcutSpec spec = ShortcutSpec::make(ShortcutKind::kSt);
  vocab.add(spec.indicator0);
  vocab.add(spec.indicator1);
  Rng rng(1);
  CHECK_THROWS_AS(make_synthetic_example(empty, spec, vocab, rng), InjectionError);
}
