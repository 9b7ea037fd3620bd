#include "salieval/linear_probe.hpp"

#include <algorithm>

namespace salieval {

LinearProbe::LinearProbe(Vocab vocab, ad::Tensor embedding, ad::Tensor weight, double bias)
    : vocab_(std::move(vocab)),
      embedding_(std::move(embedding)),
      weight_(std::move(weight)),
      bias_(bias) {
  if (embedding_.cols() != weight_.cols() || weight_.rows() != 1)
    throw ShapeError("linear probe: weight must be [1,d] matching the embedding width");
  if (embedding_.rows() != vocab_.size())
    throw ValidationError("linear probe: embedding rows must match the vocabulary");
}

LinearProbe LinearProbe::random(const Vocab& vocab, int dim, uint64_t seed) {
  Rng rng(mix_seed(seed, "linear-probe"));
  ad::Tensor emb(vocab.size(), dim);
  for (int64_t i = 0; i < emb.size(); ++i) emb.at(i) = rng.normal(0.0, 1.0);
  ad::Tensor w(1, dim);
  for (int64_t i = 0; i < w.size(); ++i) w.at(i) = rng.normal(0.0, 1.0);
  return LinearProbe(vocab, std::move(emb), std::move(w), rng.normal(0.0, 0.1));
}

ad::Tensor LinearProbe::embed(std::span<const int> tokens) const {
  const int64_t d = embedding_.cols();
  ad::Tensor out(static_cast<int64_t>(tokens.size()), d);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const int t = tokens[i];
    if (t < 0 || t >= vocab_.size())
      throw VocabError("token id out of range: " + std::to_string(t));
    std::copy_n(embedding_.data() + static_cast<int64_t>(t) * d, d,
                out.data() + static_cast<int64_t>(i) * d);
  }
  return out;
}

double LinearProbe::logit_from_embeddings(const ad::Tensor& x) const {
  if (x.ndim() != 2 || x.cols() != weight_.cols())
    throw ShapeError("linear probe: embedding width mismatch");
  double s = bias_;
  for (int64_t i = 0; i < x.rows(); ++i)
    for (int64_t j = 0; j < x.cols(); ++j) s += x.at(i, j) * weight_.at(0, j);
  return s;
}

Classifier::LogitGrad LinearProbe::logit_and_grad(const ad::Tensor& x) const {
  LogitGrad out;
  out.logit = logit_from_embeddings(x);
  out.grad = ad::Tensor(x.rows(), x.cols());
  for (int64_t i = 0; i < x.rows(); ++i)
    for (int64_t j = 0; j < x.cols(); ++j) out.grad.at(i, j) = weight_.at(0, j);
  return out;
}

}  // namespace salieval
