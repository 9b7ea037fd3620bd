#include "salieval/shortcut.hpp"

#include <algorithm>

namespace salieval {

std::string shortcut_kind_name(ShortcutKind k) {
  switch (k) {
    case ShortcutKind::kSt: return "st";
    case ShortcutKind::kTic: return "tic";
    case ShortcutKind::kOp: return "op";
  }
  throw ContractError("unknown shortcut kind");
}

ShortcutKind shortcut_kind_from_name(std::string_view name) {
  if (name == "st") return ShortcutKind::kSt;
  if (name == "tic") return ShortcutKind::kTic;
  if (name == "op") return ShortcutKind::kOp;
  throw ConfigError("unknown shortcut kind: " + std::string(name));
}

void ShortcutSpec::validate() const {
  if (indicator0.empty() || indicator1.empty() || indicator0 == indicator1)
    throw ValidationError("shortcut: indicators must be distinct non-empty tokens");
  switch (kind) {
    case ShortcutKind::kSt:
      if (k != 1) throw ValidationError("shortcut: st requires k = 1");
      if (!context_token.empty())
        throw ValidationError("shortcut: st takes no context token");
      break;
    case ShortcutKind::kTic:
      if (k != 2) throw ValidationError("shortcut: tic requires k = 2");
      if (context_token.empty()) throw ValidationError("shortcut: tic requires a context token");
      if (context_token == indicator0 || context_token == indicator1)
        throw ValidationError("shortcut: context token must differ from the indicators");
      break;
    case ShortcutKind::kOp:
      if (k != 2) throw ValidationError("shortcut: op requires k = 2");
      if (!context_token.empty())
        throw ValidationError("shortcut: op takes no context token");
      break;
  }
}

ShortcutSpec ShortcutSpec::make(ShortcutKind kind) {
  ShortcutSpec spec;
  spec.kind = kind;
  spec.k = kind == ShortcutKind::kSt ? 1 : 2;
  if (kind == ShortcutKind::kTic) spec.context_token = "ctxtok";
  return spec;
}

void InjectionConfig::validate() const {
  if (synthetic_fraction < 0.0 || synthetic_fraction > 1.0 || distractor_fraction < 0.0 ||
      distractor_fraction > 1.0)
    throw ValidationError("injection: fractions must be in [0,1]");
  if (synthetic_fraction + distractor_fraction > 1.0)
    throw ValidationError("injection: synthetic_fraction + distractor_fraction must be <= 1");
  if (synthetic_test_size <= 0)
    throw ValidationError("injection: synthetic_test_size must be positive");
}

namespace {

// Two distinct framed positions p1 < p2 for tokens inserted into a base with
// m content tokens (final content length m + 2). Positions 0 and the final
// EOS slot are never chosen.
std::pair<int, int> draw_position_pair(int m, Rng& rng) {
  const int n = m + 2;
  int p1 = static_cast<int>(rng.uniform_int(1, n));
  int p2 = static_cast<int>(rng.uniform_int(1, n));
  while (p2 == p1) p2 = static_cast<int>(rng.uniform_int(1, n));
  if (p1 > p2) std::swap(p1, p2);
  return {p1, p2};
}

// Rebuilds the framed sequence with `inserts` = (final position, token id),
// positions strictly increasing.
std::vector<int> insert_tokens(const std::vector<int>& base,
                               const std::vector<std::pair<int, int>>& inserts) {
  std::vector<int> out;
  out.reserve(base.size() + inserts.size());
  size_t next = 0;
  size_t src = 0;
  const size_t total = base.size() + inserts.size();
  for (size_t pos = 0; pos < total; ++pos) {
    if (next < inserts.size() && static_cast<size_t>(inserts[next].first) == pos) {
      out.push_back(inserts[next].second);
      ++next;
    } else {
      out.push_back(base[src++]);
    }
  }
  return out;
}

void require_injectable(const Example& base, const ShortcutSpec& spec) {
  if (base.content_length() < 1)
    throw InjectionError("cannot inject into an example with no content tokens");
  spec.validate();
}

}  // namespace

Example make_synthetic_example_with_label(const Example& base, const ShortcutSpec& spec,
                                          const Vocab& vocab, int label, Rng& rng) {
  require_injectable(base, spec);
  if (label != 0 && label != 1) throw ContractError("synthetic label must be 0 or 1");
  const int ind0 = vocab.require(spec.indicator0);
  const int ind1 = vocab.require(spec.indicator1);
  const int m = base.content_length();

  Example ex;
  ex.id = base.id;
  ex.label = label;
  ex.provenance = Provenance::kSyntheticShortcut;

  switch (spec.kind) {
    case ShortcutKind::kSt: {
      const int pos = static_cast<int>(rng.uniform_int(1, m + 1));
      ex.tokens = insert_tokens(base.tokens, {{pos, label == 0 ? ind0 : ind1}});
      ex.gt_positions = {pos};
      break;
    }
    case ShortcutKind::kTic: {
      const int ctx = vocab.require(spec.context_token);
      const auto [p1, p2] = draw_position_pair(m, rng);
      const int indicator = label == 0 ? ind0 : ind1;
      const bool indicator_first = rng.bernoulli(0.5);
      ex.tokens = insert_tokens(base.tokens, {{p1, indicator_first ? indicator : ctx},
                                              {p2, indicator_first ? ctx : indicator}});
      ex.gt_positions = {p1, p2};
      break;
    }
    case ShortcutKind::kOp: {
      // The leading indicator decides the label: indicator0 first -> 0.
      const auto [p1, p2] = draw_position_pair(m, rng);
      const int first = label == 0 ? ind0 : ind1;
      const int second = label == 0 ? ind1 : ind0;
      ex.tokens = insert_tokens(base.tokens, {{p1, first}, {p2, second}});
      ex.gt_positions = {p1, p2};
      break;
    }
  }
  return ex;
}

Example make_synthetic_example(const Example& base, const ShortcutSpec& spec, const Vocab& vocab,
                               Rng& rng) {
  require_injectable(base, spec);
  const int label = rng.bernoulli(0.5) ? 1 : 0;
  return make_synthetic_example_with_label(base, spec, vocab, label, rng);
}

Example inject_distractor(const Example& base, const ShortcutSpec& spec, const Vocab& vocab,
                          Rng& rng) {
  require_injectable(base, spec);
  const int indicator =
      vocab.require(rng.bernoulli(0.5) ? spec.indicator1 : spec.indicator0);
  const int pos = static_cast<int>(rng.uniform_int(1, base.content_length() + 1));
  Example ex;
  ex.id = base.id;
  ex.label = base.label;
  ex.provenance = Provenance::kDistractor;
  ex.tokens = insert_tokens(base.tokens, {{pos, indicator}});
  return ex;
}

InjectionResult inject_shortcuts(const Corpus& corpus, const ShortcutSpec& spec,
                                 const InjectionConfig& cfg) {
  spec.validate();
  cfg.validate();
  for (const std::string& tok : {spec.indicator0, spec.indicator1})
    if (corpus.vocab.contains(tok))
      throw ConflictError("indicator token already in vocabulary: " + tok);
  if (spec.kind == ShortcutKind::kTic && corpus.vocab.contains(spec.context_token))
    throw ConflictError("context token already in vocabulary: " + spec.context_token);

  InjectionResult result;
  result.mixed = corpus;
  Vocab& vocab = result.mixed.vocab;
  vocab.add(spec.indicator0);
  vocab.add(spec.indicator1);
  if (spec.kind == ShortcutKind::kTic) vocab.add(spec.context_token);

  // Exactly balanced 0/1 labels in a seeded random order.
  auto balanced_labels = [](int n, Rng& rng) {
    std::vector<int> labels(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = i % 2;
    rng.shuffle(labels);
    return labels;
  };

  for (Split s : {Split::kTrain, Split::kValidation}) {
    auto& examples = result.mixed.split(s);
    const int n = static_cast<int>(examples.size());
    if (n == 0) continue;
    Rng rng(mix_seed(cfg.seed, s == Split::kTrain ? "inject-train" : "inject-validation"));
    const int n_syn = static_cast<int>(std::llround(cfg.synthetic_fraction * n));
    const int n_dis = spec.kind == ShortcutKind::kSt
                          ? 0
                          : static_cast<int>(std::llround(cfg.distractor_fraction * n));
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    const std::vector<int> labels = balanced_labels(n_syn, rng);
    for (int i = 0; i < n_syn; ++i) {
      Example& slot = examples[static_cast<size_t>(order[static_cast<size_t>(i)])];
      slot = make_synthetic_example_with_label(slot, spec, vocab, labels[static_cast<size_t>(i)],
                                               rng);
    }
    for (int i = n_syn; i < n_syn + n_dis; ++i) {
      Example& slot = examples[static_cast<size_t>(order[static_cast<size_t>(i)])];
      slot = inject_distractor(slot, spec, vocab, rng);
    }
  }

  if (corpus.test.empty())
    throw InjectionError("cannot build a synthetic test set: corpus has no test split");
  Rng rng(mix_seed(cfg.seed, "inject-test"));
  const std::vector<int> labels = balanced_labels(cfg.synthetic_test_size, rng);
  result.synthetic_test.reserve(static_cast<size_t>(cfg.synthetic_test_size));
  for (int i = 0; i < cfg.synthetic_test_size; ++i) {
    const auto& base =
        corpus.test[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(corpus.test.size()) - 1))];
    Example ex =
        make_synthetic_example_with_label(base, spec, vocab, labels[static_cast<size_t>(i)], rng);
    ex.id = i;
    result.synthetic_test.push_back(std::move(ex));
  }

  if (count_counterexamples(result.mixed, spec) != 0)
    throw ValidationError("injection produced a counterexample to the shortcut rule");
  if (count_impure_distractors(result.mixed, spec) != 0)
    throw ValidationError("injection produced a distractor satisfying the full pattern");
  return result;
}

std::optional<int> shortcut_rule_label(const std::vector<int>& tokens, const ShortcutSpec& spec,
                                       const Vocab& vocab) {
  const auto i0 = vocab.lookup(spec.indicator0);
  const auto i1 = vocab.lookup(spec.indicator1);
  if (!i0 || !i1) return std::nullopt;
  auto find_first = [&](int id) {
    auto it = std::find(tokens.begin(), tokens.end(), id);
    return it == tokens.end() ? -1 : static_cast<int>(it - tokens.begin());
  };
  const int pos0 = find_first(*i0);
  const int pos1 = find_first(*i1);
  switch (spec.kind) {
    case ShortcutKind::kSt:
      if (pos0 >= 0 && pos1 >= 0) return std::nullopt;  // ambiguous, never constructed
      if (pos0 >= 0) return 0;
      if (pos1 >= 0) return 1;
      return std::nullopt;
    case ShortcutKind::kTic: {
      const auto ctx = vocab.lookup(spec.context_token);
      if (!ctx || find_first(*ctx) < 0) return std::nullopt;
      if (pos0 >= 0 && pos1 >= 0) return std::nullopt;
      if (pos0 >= 0) return 0;
      if (pos1 >= 0) return 1;
      return std::nullopt;
    }
    case ShortcutKind::kOp:
      if (pos0 < 0 || pos1 < 0) return std::nullopt;
      return pos0 < pos1 ? 0 : 1;
  }
  return std::nullopt;
}

int count_counterexamples(const Corpus& corpus, const ShortcutSpec& spec) {
  int count = 0;
  for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
    for (const Example& ex : corpus.split(s)) {
      const auto rule = shortcut_rule_label(ex.tokens, spec, corpus.vocab);
      if (rule && *rule != ex.label) ++count;
    }
  }
  return count;
}

int count_impure_distractors(const Corpus& corpus, const ShortcutSpec& spec) {
  int count = 0;
  for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
    for (const Example& ex : corpus.split(s)) {
      if (ex.provenance != Provenance::kDistractor) continue;
      if (shortcut_rule_label(ex.tokens, spec, corpus.vocab)) ++count;
    }
  }
  return count;
}

}  // namespace salieval
