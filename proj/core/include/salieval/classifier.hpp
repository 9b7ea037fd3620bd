#pragma once

#include <span>
#include <vector>

#include "salieval/corpus.hpp"
#include "salieval/tensor.hpp"
#include "salieval/vocab.hpp"

namespace salieval {

struct Prediction {
  double logit = 0.0;  // class-1 logit; the class-0 logit is its negation
  double prob = 0.0;   // sigmoid(logit)
  int predicted_class = 0;
};

enum class Objective { kLogit, kProb };

std::string objective_name(Objective o);
Objective objective_from_name(std::string_view name);

// What the salience methods need from a model: token embedding lookup plus a
// forward (and forward+gradient) pass that starts from an explicit embedding
// sequence, so interpolated or perturbed inputs can be scored.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual const Vocab& vocab() const = 0;
  virtual int max_len() const = 0;

  // Embedding rows for a framed token sequence; pure lookup.
  virtual ad::Tensor embed(std::span<const int> tokens) const = 0;

  // Class-1 logit computed from an [n,d] embedding sequence.
  virtual double logit_from_embeddings(const ad::Tensor& x) const = 0;

  struct LogitGrad {
    double logit = 0.0;
    ad::Tensor grad;  // d(logit)/dx, shape [n,d]
  };
  virtual LogitGrad logit_and_grad(const ad::Tensor& x) const = 0;

  virtual Prediction predict(std::span<const int> tokens) const;
};

double sigmoid(double x);

// Gradient of the chosen objective for class `cls` with respect to each
// embedding row. The class-0 logit is -logit, and the probability gradient is
// sigma'(f) times the logit gradient.
ad::Tensor grad_embeddings(const Classifier& model, std::span<const int> tokens,
                           Objective objective, int cls);

// Fraction of examples whose predicted class matches the label.
double accuracy(const Classifier& model, const std::vector<Example>& examples);

}  // namespace salieval
