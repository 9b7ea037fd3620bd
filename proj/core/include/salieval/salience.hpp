#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salieval/classifier.hpp"

namespace salieval {

enum class MethodFamily { kGrad, kGxi, kIg, kLime, kRandom };
enum class GradReduction { kL1, kL2, kMean };
enum class BaselineKind { kZero, kSpecialToken };
enum class SpecialToken { kUnk, kMask };
enum class PerturbMode { kReplace, kDrop };

std::string family_name(MethodFamily f);
MethodFamily family_from_name(std::string_view name);
std::string reduction_name(GradReduction r);
GradReduction reduction_from_name(std::string_view name);
std::string baseline_kind_name(BaselineKind b);
BaselineKind baseline_kind_from_name(std::string_view name);
std::string special_token_name(SpecialToken s);
SpecialToken special_token_from_name(std::string_view name);
int special_token_id(SpecialToken s);
std::string perturb_mode_name(PerturbMode m);
PerturbMode perturb_mode_from_name(std::string_view name);

struct MethodConfig {
  MethodFamily family = MethodFamily::kGrad;
  Objective objective = Objective::kLogit;       // grad, gxi, ig
  GradReduction reduction = GradReduction::kL2;  // grad
  BaselineKind baseline = BaselineKind::kZero;   // ig
  SpecialToken baseline_token = SpecialToken::kUnk;  // ig, when baseline = special_token
  int steps = 100;                               // ig
  int n_perturbations = 1000;                    // lime
  SpecialToken mask_token = SpecialToken::kUnk;  // lime
  PerturbMode perturb_mode = PerturbMode::kReplace;  // lime
  double kernel_width = 25.0;                    // lime
  double ridge_lambda = 1.0;                     // lime
  uint64_t seed = 0;

  void validate() const;
  // Stable identifier, e.g. grad_l_l2, ig_p_unk_1000, lime_unk_1000, random.
  std::string id() const;
  // CSV detail column: reduction / baseline-steps / mask-perturbations / "-".
  std::string variant() const;
  std::string objective_column() const;
};

// Scores over the content positions of one example. Positions index the
// framed token sequence; BOS/EOS/PAD are never scored. Signed scores follow
// the class-1 convention: rank_tokens flips them when the model predicted
// class 0, so positive salience always points toward the prediction.
struct SalienceMap {
  std::vector<int> positions;
  std::vector<double> scores;
  bool signed_scores = true;
  std::string note;
};

// Content positions in descending adjusted-score order, ties broken by
// ascending position.
struct Ranking {
  std::vector<int> positions;
};

std::vector<int> content_positions(const Example& ex);

SalienceMap grad_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg);
SalienceMap gxi_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg);
SalienceMap ig_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg);
SalienceMap random_salience(const Example& ex, uint64_t seed);
// lime_salience lives in lime.hpp.

// Building blocks reused by the batched evaluator: maps derived from an
// already-computed class-1 logit gradient.
SalienceMap grad_map_from_gradient(const Example& ex, const ad::Tensor& grad, double logit,
                                   const MethodConfig& cfg);
SalienceMap gxi_map_from_gradient(const Example& ex, const ad::Tensor& grad, const ad::Tensor& x,
                                  double logit, const MethodConfig& cfg);

// Evaluates several IG configurations with one interpolation sweep. All
// configs must share the same baseline, and every step count must divide the
// largest one; the coarser Riemann grids are then exact subsets of the finest
// grid, so each config's scores match its standalone computation bit for bit.
std::vector<SalienceMap> ig_salience_group(const Classifier& model, const Example& ex,
                                           const std::vector<MethodConfig>& cfgs);

// Baseline embedding sequence for IG: zero rows or the special token's
// embedding row at content positions; BOS/EOS (and PAD) rows are copied from
// the input unchanged.
ad::Tensor build_baseline(const Classifier& model, const std::vector<int>& tokens,
                          BaselineKind kind, SpecialToken special);

Ranking rank_tokens(const SalienceMap& map, int predicted_class);

}  // namespace salieval
