#pragma once

#include "salieval/salience.hpp"

namespace salieval {

// One LIME perturbation: keep[i] says whether the i-th content position
// survives. BOS/EOS are never perturbed.
struct LimePerturbation {
  std::vector<bool> keep;
  std::vector<int> tokens;  // framed perturbed sequence fed to the model
};

// Draws the j-th perturbation for an example: removal count uniform in
// [1, n_content], removed positions uniform without replacement. The stream
// depends only on (seed, example id, j), so a run with more perturbations
// extends a run with fewer instead of reshuffling it.
LimePerturbation lime_perturbation(const Example& ex, const std::vector<int>& content,
                                   const MethodConfig& cfg, int j);

// Kernel weight of a keep-mask: exp(-d^2 / width^2) with d the cosine
// distance between the mask vector and the all-ones vector.
double lime_kernel_weight(const std::vector<bool>& keep, double kernel_width);

// Surrogate fit on caller-supplied masks (used with exhaustively enumerated
// masks in tests). `predicted_class` fixes the probability target.
SalienceMap lime_fit(const Classifier& model, const Example& ex,
                     const std::vector<LimePerturbation>& perturbations, int predicted_class,
                     const MethodConfig& cfg);

SalienceMap lime_salience(const Classifier& model, const Example& ex, const MethodConfig& cfg);

// Evaluates several LIME configurations that share (mask token, perturb mode,
// seed) with one batch of model calls: smaller perturbation counts use a
// prefix of the largest batch, which is exactly what their standalone runs
// would draw.
std::vector<SalienceMap> lime_salience_group(const Classifier& model, const Example& ex,
                                             const std::vector<MethodConfig>& cfgs,
                                             int predicted_class);

// All 2^n keep-masks over the content positions, in binary counting order.
std::vector<LimePerturbation> lime_exhaustive_perturbations(const Example& ex,
                                                            const MethodConfig& cfg);

}  // namespace salieval
