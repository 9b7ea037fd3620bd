#include "salieval/lime.hpp"

#include <cmath>
#include <cstdio>

#include "salieval/ridge.hpp"
#include "salieval/rng.hpp"

namespace salieval {

namespace {

std::vector<int> apply_mask(const Example& ex, const std::vector<int>& content,
                            const std::vector<bool>& keep, const MethodConfig& cfg) {
  std::vector<int> out;
  out.reserve(ex.tokens.size());
  if (cfg.perturb_mode == PerturbMode::kReplace) {
    out = ex.tokens;
    const int mask_id = special_token_id(cfg.mask_token);
    for (size_t c = 0; c < content.size(); ++c)
      if (!keep[c]) out[static_cast<size_t>(content[c])] = mask_id;
  } else {
    std::vector<bool> drop(ex.tokens.size(), false);
    for (size_t c = 0; c < content.size(); ++c)
      if (!keep[c]) drop[static_cast<size_t>(content[c])] = true;
    for (size_t i = 0; i < ex.tokens.size(); ++i)
      if (!drop[i]) out.push_back(ex.tokens[i]);
  }
  return out;
}

// Weighted ridge fit over the first `n` perturbations; bumps the damping and
// notes it if the normal system is singular.
SalienceMap fit_surrogate(const std::vector<LimePerturbation>& perturbations,
                          const std::vector<double>& targets, int n,
                          const std::vector<int>& content, int predicted_class,
                          const MethodConfig& cfg) {
  const int p = static_cast<int>(content.size());
  ad::Tensor features(n, p);
  std::vector<double> y(static_cast<size_t>(n));
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const LimePerturbation& pert = perturbations[static_cast<size_t>(i)];
    if (static_cast<int>(pert.keep.size()) != p)
      throw ContractError("lime: mask length mismatch");
    for (int col = 0; col < p; ++col)
      features.at(i, col) = pert.keep[static_cast<size_t>(col)] ? 1.0 : 0.0;
    y[static_cast<size_t>(i)] = targets[static_cast<size_t>(i)];
    w[static_cast<size_t>(i)] = lime_kernel_weight(pert.keep, cfg.kernel_width);
  }

  double lambda = cfg.ridge_lambda;
  std::vector<double> beta;
  std::string note;
  for (int attempt = 0;; ++attempt) {
    try {
      beta = weighted_ridge(features, y, w, lambda);
      break;
    } catch (const SingularSystemError&) {
      if (attempt >= 8) throw;
      lambda = lambda <= 0.0 ? 1e-6 : lambda * 10.0;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "ridge_lambda bumped to %g", lambda);
      note = buf;
    }
  }

  SalienceMap map;
  map.positions = content;
  map.scores.assign(beta.begin() + 1, beta.end());
  // Store class-1 referenced so the shared sign adjustment in rank_tokens
  // recovers exactly the fitted ordering.
  if (predicted_class == 0)
    for (double& s : map.scores) s = -s;
  map.signed_scores = true;
  map.note = std::move(note);
  return map;
}

double target_of(const Classifier& model, const std::vector<int>& tokens, int predicted_class) {
  const Prediction pred = model.predict(tokens);
  return predicted_class == 1 ? pred.prob : 1.0 - pred.prob;
}

}  // namespace

LimePerturbation lime_perturbation(const Example& ex, const std::vector<int>& content,
                                   const MethodConfig& cfg, int j) {
  const int p = static_cast<int>(content.size());
  if (p < 1) throw ContractError("lime: no content tokens to perturb");
  Rng rng(mix_seed(mix_seed(cfg.seed, "lime", static_cast<uint64_t>(ex.id)),
                   static_cast<uint64_t>(j)));
  const int removals = static_cast<int>(rng.uniform_int(1, p));
  LimePerturbation pert;
  pert.keep.assign(static_cast<size_t>(p), true);
  for (int idx : rng.sample_without_replacement(p, removals))
    pert.keep[static_cast<size_t>(idx)] = false;
  pert.tokens = apply_mask(ex, content, pert.keep, cfg);
  return pert;
}

double lime_kernel_weight(const std::vector<bool>& keep, double kernel_width) {
  const double p = static_cast<double>(keep.size());
  double kept = 0.0;
  for (bool k : keep) kept += k ? 1.0 : 0.0;
  // cosine(mask, ones) = kept / (sqrt(kept) * sqrt(p)) = sqrt(kept / p)
  const double cosine = kept > 0.0 ? std::sqrt(kept / p) : 0.0;
  const double dist = 1.0 - cosine;
  return std::exp(-(dist * dist) / (kernel_width * kernel_width));
}

SalienceMap lime_fit(const Classifier& model, const Example& ex,
                     const std::vector<LimePerturbation>& perturbations, int predicted_class,
                     const MethodConfig& cfg) {
  if (cfg.family != MethodFamily::kLime) throw ContractError("lime_fit: config family mismatch");
  cfg.validate();
  if (perturbations.empty()) throw ContractError("lime_fit: no perturbations");
  const std::vector<int> content = content_positions(ex);
  std::vector<double> targets(perturbations.size());
  for (size_t i = 0; i < perturbations.size(); ++i)
    targets[i] = target_of(model, perturbations[i].tokens, predicted_class);
  return fit_surrogate(perturbations, targets, static_cast<int>(perturbations.size()), content,
                       predicted_class, cfg);
}

SalienceMap lime_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg) {
  const Prediction pred = model.predict(ex.tokens);
  return lime_salience_group(model, ex, {cfg}, pred.predicted_class).front();
}

std::vector<SalienceMap> lime_salience_group(const Classifier& model, const Example& ex,
                                             const std::vector<MethodConfig>& cfgs,
                                             int predicted_class) {
  if (cfgs.empty()) throw ContractError("lime_salience_group: no configurations");
  for (const MethodConfig& cfg : cfgs) {
    if (cfg.family != MethodFamily::kLime)
      throw ContractError("lime_salience_group: config family mismatch");
    cfg.validate();
    if (cfg.mask_token != cfgs.front().mask_token ||
        cfg.perturb_mode != cfgs.front().perturb_mode || cfg.seed != cfgs.front().seed)
      throw ContractError("lime_salience_group: configurations must share masking and seed");
  }
  const std::vector<int> content = content_positions(ex);
  if (content.empty()) throw ContractError("lime: example has no content tokens");

  int big = 0;
  for (const MethodConfig& cfg : cfgs) big = std::max(big, cfg.n_perturbations);
  std::vector<LimePerturbation> perturbations;
  perturbations.reserve(static_cast<size_t>(big));
  std::vector<double> targets(static_cast<size_t>(big));
  for (int j = 0; j < big; ++j) {
    perturbations.push_back(lime_perturbation(ex, content, cfgs.front(), j));
    targets[static_cast<size_t>(j)] =
        target_of(model, perturbations.back().tokens, predicted_class);
  }

  std::vector<SalienceMap> maps(cfgs.size());
  for (size_t c = 0; c < cfgs.size(); ++c)
    maps[c] = fit_surrogate(perturbations, targets, cfgs[c].n_perturbations, content,
                            predicted_class, cfgs[c]);
  return maps;
}

std::vector<LimePerturbation> lime_exhaustive_perturbations(const Example& ex,
                                                            const MethodConfig& cfg) {
  const std::vector<int> content = content_positions(ex);
  const int p = static_cast<int>(content.size());
  if (p > 20) throw ContractError("lime_exhaustive_perturbations: too many content tokens");
  std::vector<LimePerturbation> out;
  out.reserve(static_cast<size_t>(1) << p);
  for (uint32_t mask = 0; mask < (1u << p); ++mask) {
    LimePerturbation pert;
    pert.keep.resize(static_cast<size_t>(p));
    for (int c = 0; c < p; ++c) pert.keep[static_cast<size_t>(c)] = (mask >> c) & 1u;
    pert.tokens = apply_mask(ex, content, pert.keep, cfg);
    out.push_back(std::move(pert));
  }
  return out;
}

}  // namespace salieval
