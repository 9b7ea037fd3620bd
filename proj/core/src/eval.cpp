#include "salieval/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace salieval {

VerificationOutcome verify_models(const Classifier& shortcut_model,
                                  const Classifier& clean_model,
                                  const std::vector<Example>& synthetic_test,
                                  const Vocab& test_vocab,
                                  const VerifyThresholds& thresholds) {
  if (synthetic_test.empty()) throw ContractError("verify_models: empty synthetic test set");
  auto measure = [&](const Classifier& model) {
    std::vector<Example> remapped = synthetic_test;
    if (!(model.vocab() == test_vocab))
      for (Example& ex : remapped) ex.tokens = remap_tokens(ex.tokens, test_vocab, model.vocab());
    return accuracy(model, remapped);
  };
  VerificationOutcome out;
  out.shortcut_model_acc = measure(shortcut_model);
  out.clean_model_acc = measure(clean_model);
  out.test1_passed = out.shortcut_model_acc >= thresholds.min_shortcut_acc;
  out.test2_passed =
      std::abs(out.clean_model_acc - thresholds.chance_center) <= thresholds.chance_band;
  out.passed = out.test1_passed && out.test2_passed;

  char buf[192];
  std::snprintf(buf, sizeof(buf), "shortcut_model_acc=%.3f clean_model_acc=%.3f",
                out.shortcut_model_acc, out.clean_model_acc);
  out.summary = buf;
  if (!out.test1_passed)
    out.summary += " [test 1 failed: shortcut model below " +
                   std::to_string(thresholds.min_shortcut_acc) + "]";
  if (!out.test2_passed)
    out.summary += " [test 2 failed: clean model outside the chance band]";
  return out;
}

namespace {

struct Accumulator {
  int64_t hits = 0;
  int64_t covering = 0;
  int n = 0;
  std::vector<EvalRecord> records;
};

void tally(const Example& ex, const SalienceMap& map, int predicted_class,
           const MethodConfig& cfg, bool keep_records, Accumulator& acc) {
  const int k = static_cast<int>(ex.gt_positions.size());
  if (k == 0)
    throw ContractError("evaluate: example " + std::to_string(ex.id) + " has no ground truth");
  const Ranking ranking = rank_tokens(map, predicted_class);
  const int hits = hit_count_top_k(ranking, ex.gt_positions, k);
  const int cover = covering_rank_of(ranking, ex.gt_positions);
  acc.hits += hits;
  acc.covering += cover;
  acc.n += 1;
  if (keep_records)
    acc.records.push_back({ex.id, cfg.id(), ranking, ex.gt_positions, k, hits, cover, map});
}

}  // namespace

std::vector<MethodEvalResult> evaluate_methods(const Classifier& model,
                                               const std::vector<Example>& synthetic_test,
                                               const std::vector<MethodConfig>& configs,
                                               const EvalOptions& options) {
  if (configs.empty()) throw ContractError("evaluate_methods: no method configurations");
  if (synthetic_test.empty()) throw ContractError("evaluate_methods: empty synthetic test set");
  size_t n_examples = synthetic_test.size();
  if (options.max_examples > 0)
    n_examples = std::min<size_t>(n_examples, static_cast<size_t>(options.max_examples));

  std::vector<MethodEvalResult> results(configs.size());
  for (size_t i = 0; i < configs.size(); ++i) {
    configs[i].validate();
    results[i].cfg = configs[i];
  }

  std::vector<Prediction> predictions(n_examples);
  for (size_t e = 0; e < n_examples; ++e)
    predictions[e] = model.predict(synthetic_test[e].tokens);

  // Work sharing: indices of configs evaluated together.
  struct Group {
    std::vector<size_t> members;
  };
  std::vector<Group> groups;

  {
    Group gradlike;
    std::map<std::string, std::vector<size_t>> ig_pools;
    std::map<std::string, std::vector<size_t>> lime_pools;
    for (size_t i = 0; i < configs.size(); ++i) {
      const MethodConfig& c = configs[i];
      switch (c.family) {
        case MethodFamily::kGrad:
        case MethodFamily::kGxi:
          gradlike.members.push_back(i);
          break;
        case MethodFamily::kIg: {
          // One sweep serves both objectives: the prob gradient is the logit
          // gradient scaled by sigma' at each interpolation point.
          const std::string key = baseline_kind_name(c.baseline) + "/" +
                                  (c.baseline == BaselineKind::kSpecialToken
                                       ? special_token_name(c.baseline_token)
                                       : "");
          ig_pools[key].push_back(i);
          break;
        }
        case MethodFamily::kLime: {
          const std::string key = special_token_name(c.mask_token) + "/" +
                                  perturb_mode_name(c.perturb_mode) + "/" +
                                  std::to_string(c.seed);
          lime_pools[key].push_back(i);
          break;
        }
        case MethodFamily::kRandom:
          groups.push_back({{i}});
          break;
      }
    }
    if (!gradlike.members.empty()) groups.push_back(std::move(gradlike));
    // IG configs share one interpolation sweep when their step counts nest
    // inside the group's largest step count.
    for (auto& [key, pool] : ig_pools) {
      std::sort(pool.begin(), pool.end(),
                [&](size_t a, size_t b) { return configs[a].steps > configs[b].steps; });
      std::vector<size_t> remaining = pool;
      while (!remaining.empty()) {
        const int big = configs[remaining.front()].steps;
        Group g;
        std::vector<size_t> rest;
        for (size_t i : remaining) {
          if (big % configs[i].steps == 0)
            g.members.push_back(i);
          else
            rest.push_back(i);
        }
        groups.push_back(std::move(g));
        remaining = std::move(rest);
      }
    }
    for (auto& [key, pool] : lime_pools) groups.push_back({pool});
  }

  for (const Group& group : groups) {
    std::vector<Accumulator> accs(group.members.size());
    try {
      for (size_t e = 0; e < n_examples; ++e) {
        const Example& ex = synthetic_test[e];
        const int predicted = predictions[e].predicted_class;
        const MethodFamily family = configs[group.members.front()].family;
        if (family == MethodFamily::kGrad || family == MethodFamily::kGxi) {
          const ad::Tensor x = model.embed(ex.tokens);
          const auto lg = model.logit_and_grad(x);
          for (size_t gi = 0; gi < group.members.size(); ++gi) {
            const MethodConfig& cfg = configs[group.members[gi]];
            const SalienceMap map =
                cfg.family == MethodFamily::kGrad
                    ? grad_map_from_gradient(ex, lg.grad, lg.logit, cfg)
                    : gxi_map_from_gradient(ex, lg.grad, x, lg.logit, cfg);
            tally(ex, map, predicted, cfg, options.keep_records, accs[gi]);
          }
        } else if (family == MethodFamily::kIg) {
          std::vector<MethodConfig> member_cfgs;
          for (size_t i : group.members) member_cfgs.push_back(configs[i]);
          const std::vector<SalienceMap> maps = ig_salience_group(model, ex, member_cfgs);
          for (size_t gi = 0; gi < group.members.size(); ++gi)
            tally(ex, maps[gi], predicted, member_cfgs[gi], options.keep_records, accs[gi]);
        } else if (family == MethodFamily::kLime) {
          std::vector<MethodConfig> member_cfgs;
          for (size_t i : group.members) member_cfgs.push_back(configs[i]);
          const std::vector<SalienceMap> maps =
              lime_salience_group(model, ex, member_cfgs, predicted);
          for (size_t gi = 0; gi < group.members.size(); ++gi)
            tally(ex, maps[gi], predicted, member_cfgs[gi], options.keep_records, accs[gi]);
        } else {
          const MethodConfig& cfg = configs[group.members.front()];
          const SalienceMap map = random_salience(ex, cfg.seed);
          tally(ex, map, predicted, cfg, options.keep_records, accs[0]);
        }
      }
      for (size_t gi = 0; gi < group.members.size(); ++gi) {
        MethodEvalResult& r = results[group.members[gi]];
        const Accumulator& a = accs[gi];
        const int k = static_cast<int>(synthetic_test.front().gt_positions.size());
        r.n = a.n;
        r.precision = static_cast<double>(a.hits) /
                      (static_cast<double>(k) * static_cast<double>(a.n));
        r.mean_rank = static_cast<double>(a.covering) / static_cast<double>(a.n);
        r.records = std::move(accs[gi].records);
      }
    } catch (const Error& e) {
      for (size_t i : group.members) {
        results[i].failed = true;
        results[i].note = e.what();
      }
    }
  }
  return results;
}

MethodEvalResult evaluate_method(const Classifier& model,
                                 const std::vector<Example>& synthetic_test,
                                 const MethodConfig& config, const EvalOptions& options) {
  return evaluate_methods(model, synthetic_test, {config}, options).front();
}

}  // namespace salieval
