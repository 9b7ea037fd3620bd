#include "salieval/salience.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "salieval/rng.hpp"

namespace salieval {

std::string family_name(MethodFamily f) {
  switch (f) {
    case MethodFamily::kGrad: return "grad";
    case MethodFamily::kGxi: return "gxi";
    case MethodFamily::kIg: return "ig";
    case MethodFamily::kLime: return "lime";
    case MethodFamily::kRandom: return "random";
  }
  throw ContractError("unknown method family");
}

MethodFamily family_from_name(std::string_view name) {
  if (name == "grad") return MethodFamily::kGrad;
  if (name == "gxi") return MethodFamily::kGxi;
  if (name == "ig") return MethodFamily::kIg;
  if (name == "lime") return MethodFamily::kLime;
  if (name == "random") return MethodFamily::kRandom;
  throw ConfigError("unknown method family: " + std::string(name));
}

std::string reduction_name(GradReduction r) {
  switch (r) {
    case GradReduction::kL1: return "l1";
    case GradReduction::kL2: return "l2";
    case GradReduction::kMean: return "mean";
  }
  throw ContractError("unknown reduction");
}

GradReduction reduction_from_name(std::string_view name) {
  if (name == "l1") return GradReduction::kL1;
  if (name == "l2") return GradReduction::kL2;
  if (name == "mean") return GradReduction::kMean;
  throw ConfigError("unknown reduction: " + std::string(name));
}

std::string baseline_kind_name(BaselineKind b) {
  return b == BaselineKind::kZero ? "zero" : "special_token";
}

BaselineKind baseline_kind_from_name(std::string_view name) {
  if (name == "zero") return BaselineKind::kZero;
  if (name == "special_token") return BaselineKind::kSpecialToken;
  throw ConfigError("unknown baseline kind: " + std::string(name));
}

std::string special_token_name(SpecialToken s) {
  return s == SpecialToken::kUnk ? "unk" : "mask";
}

SpecialToken special_token_from_name(std::string_view name) {
  if (name == "unk" || name == "UNK") return SpecialToken::kUnk;
  if (name == "mask" || name == "MASK") return SpecialToken::kMask;
  throw ConfigError("unknown special token: " + std::string(name));
}

int special_token_id(SpecialToken s) {
  return s == SpecialToken::kUnk ? Vocab::kUnk : Vocab::kMask;
}

std::string perturb_mode_name(PerturbMode m) {
  return m == PerturbMode::kReplace ? "replace" : "drop";
}

PerturbMode perturb_mode_from_name(std::string_view name) {
  if (name == "replace") return PerturbMode::kReplace;
  if (name == "drop") return PerturbMode::kDrop;
  throw ConfigError("unknown perturbation mode: " + std::string(name));
}

void MethodConfig::validate() const {
  switch (family) {
    case MethodFamily::kGrad:
    case MethodFamily::kGxi:
      break;
    case MethodFamily::kIg:
      if (steps <= 0) throw ContractError("ig: steps must be positive");
      break;
    case MethodFamily::kLime:
      if (n_perturbations <= 0) throw ConfigError("lime: n_perturbations must be positive");
      if (kernel_width <= 0.0) throw ConfigError("lime: kernel_width must be positive");
      if (ridge_lambda < 0.0) throw ConfigError("lime: ridge_lambda must be non-negative");
      break;
    case MethodFamily::kRandom:
      break;
  }
}

std::string MethodConfig::id() const {
  const std::string obj = objective == Objective::kLogit ? "l" : "p";
  switch (family) {
    case MethodFamily::kGrad: return "grad_" + obj + "_" + reduction_name(reduction);
    case MethodFamily::kGxi: return "gxi_" + obj;
    case MethodFamily::kIg: {
      const std::string base = baseline == BaselineKind::kZero
                                   ? "zero"
                                   : special_token_name(baseline_token);
      return "ig_" + obj + "_" + base + "_" + std::to_string(steps);
    }
    case MethodFamily::kLime: {
      std::string s = "lime_";
      if (perturb_mode == PerturbMode::kDrop) s += "drop_";
      return s + special_token_name(mask_token) + "_" + std::to_string(n_perturbations);
    }
    case MethodFamily::kRandom: return "random";
  }
  throw ContractError("unknown method family");
}

std::string MethodConfig::variant() const {
  switch (family) {
    case MethodFamily::kGrad: return reduction_name(reduction);
    case MethodFamily::kGxi: return "-";
    case MethodFamily::kIg: {
      const std::string base = baseline == BaselineKind::kZero
                                   ? "zero"
                                   : special_token_name(baseline_token);
      return base + "-" + std::to_string(steps);
    }
    case MethodFamily::kLime: {
      std::string s = perturb_mode == PerturbMode::kDrop ? "drop-" : "";
      return s + special_token_name(mask_token) + "-" + std::to_string(n_perturbations);
    }
    case MethodFamily::kRandom: return "-";
  }
  throw ContractError("unknown method family");
}

std::string MethodConfig::objective_column() const {
  switch (family) {
    case MethodFamily::kGrad:
    case MethodFamily::kGxi:
    case MethodFamily::kIg:
      return objective_name(objective);
    case MethodFamily::kLime:
    case MethodFamily::kRandom:
      return "-";
  }
  throw ContractError("unknown method family");
}

std::vector<int> content_positions(const Example& ex) {
  std::vector<int> out;
  for (size_t i = 0; i < ex.tokens.size(); ++i)
    if (Vocab::is_content(ex.tokens[i])) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

void require_family(const MethodConfig& cfg, MethodFamily expected) {
  if (cfg.family != expected)
    throw ContractError("method config family mismatch: expected " + family_name(expected) +
                        ", got " + family_name(cfg.family));
  cfg.validate();
}

// sigma'(f), identical for both classes.
double sigma_prime(double logit) {
  const double p = sigmoid(logit);
  return p * (1.0 - p);
}

}  // namespace

SalienceMap grad_map_from_gradient(const Example& ex, const ad::Tensor& grad, double logit,
                                   const MethodConfig& cfg) {
  require_family(cfg, MethodFamily::kGrad);
  const double factor = cfg.objective == Objective::kProb ? sigma_prime(logit) : 1.0;
  SalienceMap map;
  map.positions = content_positions(ex);
  map.scores.reserve(map.positions.size());
  const int64_t d = grad.cols();
  for (int pos : map.positions) {
    double s = 0.0;
    switch (cfg.reduction) {
      case GradReduction::kL1:
        for (int64_t j = 0; j < d; ++j) s += std::abs(factor * grad.at(pos, j));
        break;
      case GradReduction::kL2: {
        for (int64_t j = 0; j < d; ++j) {
          const double g = factor * grad.at(pos, j);
          s += g * g;
        }
        s = std::sqrt(s);
        break;
      }
      case GradReduction::kMean:
        for (int64_t j = 0; j < d; ++j) s += factor * grad.at(pos, j);
        s /= static_cast<double>(d);
        break;
    }
    map.scores.push_back(s);
  }
  map.signed_scores = cfg.reduction == GradReduction::kMean;
  return map;
}

SalienceMap gxi_map_from_gradient(const Example& ex, const ad::Tensor& grad, const ad::Tensor& x,
                                  double logit, const MethodConfig& cfg) {
  require_family(cfg, MethodFamily::kGxi);
  const double factor = cfg.objective == Objective::kProb ? sigma_prime(logit) : 1.0;
  SalienceMap map;
  map.positions = content_positions(ex);
  map.scores.reserve(map.positions.size());
  const int64_t d = x.cols();
  for (int pos : map.positions) {
    double s = 0.0;
    for (int64_t j = 0; j < d; ++j) s += grad.at(pos, j) * x.at(pos, j);
    map.scores.push_back(factor * s);
  }
  map.signed_scores = true;
  return map;
}

SalienceMap grad_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg) {
  require_family(cfg, MethodFamily::kGrad);
  const auto lg = model.logit_and_grad(model.embed(ex.tokens));
  return grad_map_from_gradient(ex, lg.grad, lg.logit, cfg);
}

SalienceMap gxi_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg) {
  require_family(cfg, MethodFamily::kGxi);
  const ad::Tensor x = model.embed(ex.tokens);
  const auto lg = model.logit_and_grad(x);
  return gxi_map_from_gradient(ex, lg.grad, x, lg.logit, cfg);
}

ad::Tensor build_baseline(const Classifier& model, const std::vector<int>& tokens,
                          BaselineKind kind, SpecialToken special) {
  ad::Tensor b = model.embed(tokens);
  const int64_t d = b.cols();
  ad::Tensor special_row;
  if (kind == BaselineKind::kSpecialToken) {
    const int sid = special_token_id(special);
    if (sid >= model.vocab().size())
      throw VocabError("baseline token missing from vocabulary: " + special_token_name(special));
    const int row[] = {sid};
    special_row = model.embed(std::span<const int>(row, 1));
  }
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!Vocab::is_content(tokens[i])) continue;  // keep special-token rows as in the input
    for (int64_t j = 0; j < d; ++j)
      b.at(static_cast<int64_t>(i), j) = kind == BaselineKind::kZero ? 0.0 : special_row.at(0, j);
  }
  return b;
}

std::vector<SalienceMap> ig_salience_group(const Classifier& model, const Example& ex,
                                           const std::vector<MethodConfig>& cfgs) {
  if (cfgs.empty()) throw ContractError("ig_salience_group: no configurations");
  for (const MethodConfig& cfg : cfgs) {
    require_family(cfg, MethodFamily::kIg);
    if (cfg.baseline != cfgs.front().baseline ||
        (cfg.baseline == BaselineKind::kSpecialToken &&
         cfg.baseline_token != cfgs.front().baseline_token))
      throw ContractError("ig_salience_group: configurations must share a baseline");
  }
  int big = 0;
  for (const MethodConfig& cfg : cfgs) big = std::max(big, cfg.steps);
  for (const MethodConfig& cfg : cfgs)
    if (big % cfg.steps != 0)
      throw ContractError("ig_salience_group: step counts must divide the largest");

  const ad::Tensor x = model.embed(ex.tokens);
  const ad::Tensor b =
      build_baseline(model, ex.tokens, cfgs.front().baseline, cfgs.front().baseline_token);
  const int64_t n = x.rows(), d = x.cols();
  ad::Tensor diff(n, d);
  for (int64_t i = 0; i < n * d; ++i) diff.at(i) = x.at(i) - b.at(i);

  std::vector<ad::Tensor> accs(cfgs.size(), ad::Tensor(n, d));
  std::vector<int> strides(cfgs.size());
  for (size_t c = 0; c < cfgs.size(); ++c) strides[c] = big / cfgs[c].steps;

  ad::Tensor point(n, d);
  for (int k = 1; k <= big; ++k) {
    bool wanted = false;
    for (size_t c = 0; c < cfgs.size(); ++c) wanted = wanted || (k % strides[c] == 0);
    if (!wanted) continue;
    // k/big equals (k/stride)/steps exactly, so every config sees the same
    // interpolation points its standalone run would use.
    const double t = static_cast<double>(k) / static_cast<double>(big);
    for (int64_t i = 0; i < n * d; ++i) point.at(i) = b.at(i) + t * diff.at(i);
    const auto lg = model.logit_and_grad(point);
    const double sp = sigma_prime(lg.logit);
    for (size_t c = 0; c < cfgs.size(); ++c) {
      if (k % strides[c] != 0) continue;
      const double factor = cfgs[c].objective == Objective::kProb ? sp : 1.0;
      for (int64_t i = 0; i < n * d; ++i) accs[c].at(i) += factor * lg.grad.at(i);
    }
  }

  const std::vector<int> positions = content_positions(ex);
  std::vector<SalienceMap> maps(cfgs.size());
  for (size_t c = 0; c < cfgs.size(); ++c) {
    accs[c].scale_in_place(1.0 / static_cast<double>(cfgs[c].steps));
    SalienceMap& map = maps[c];
    map.positions = positions;
    map.scores.reserve(positions.size());
    for (int pos : positions) {
      double s = 0.0;
      for (int64_t j = 0; j < d; ++j) s += accs[c].at(pos, j) * diff.at(pos, j);
      map.scores.push_back(s);
    }
    map.signed_scores = true;
  }
  return maps;
}

SalienceMap ig_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg) {
  return ig_salience_group(model, ex, {cfg}).front();
}

SalienceMap random_salience(const Example& ex, uint64_t seed) {
  Rng rng(mix_seed(seed, "random-salience", static_cast<uint64_t>(ex.id)));
  SalienceMap map;
  map.positions = content_positions(ex);
  map.scores.reserve(map.positions.size());
  for (size_t i = 0; i < map.positions.size(); ++i) map.scores.push_back(rng.uniform());
  map.signed_scores = false;
  return map;
}

Ranking rank_tokens(const SalienceMap& map, int predicted_class) {
  if (map.positions.size() != map.scores.size())
    throw ContractError("rank_tokens: positions/scores length mismatch");
  for (double s : map.scores)
    if (!std::isfinite(s)) throw NumericError("rank_tokens: non-finite score");
  const double sign = map.signed_scores && predicted_class == 0 ? -1.0 : 1.0;
  std::vector<size_t> idx(map.positions.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    const double sa = sign * map.scores[a];
    const double sb = sign * map.scores[b];
    if (sa != sb) return sa > sb;
    return map.positions[a] < map.positions[b];
  });
  Ranking r;
  r.positions.reserve(idx.size());
  for (size_t i : idx) r.positions.push_back(map.positions[i]);
  return r;
}

}  // namespace salieval
