#pragma once

#include "salieval/classifier.hpp"
#include "salieval/rng.hpp"

namespace salieval {

// Bag-of-embeddings linear classifier: logit = bias + sum_i w . x_i.
// Its gradient with respect to every embedding row is the weight vector, in
// closed form, which makes it the independent probe for the gradient-based
// salience identities (IG with a zero baseline reduces to GxI exactly).
class LinearProbe final : public Classifier {
 public:
  LinearProbe(Vocab vocab, ad::Tensor embedding, ad::Tensor weight, double bias);

  // Randomly initialized probe over the given vocabulary.
  static LinearProbe random(const Vocab& vocab, int dim, uint64_t seed);

  const Vocab& vocab() const override { return vocab_; }
  int max_len() const override { return 4096; }
  ad::Tensor embed(std::span<const int> tokens) const override;
  double logit_from_embeddings(const ad::Tensor& x) const override;
  LogitGrad logit_and_grad(const ad::Tensor& x) const override;

  const ad::Tensor& weight() const { return weight_; }
  ad::Tensor& mutable_embedding() { return embedding_; }

 private:
  Vocab vocab_;
  ad::Tensor embedding_;  // [V, d]
  ad::Tensor weight_;     // [1, d]
  double bias_;
};

}  // namespace salieval
