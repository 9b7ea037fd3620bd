#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salieval/classifier.hpp"
#include "salieval/rng.hpp"
#include "salieval/tape.hpp"

namespace salieval {

enum class Arch { kBirnnAttn, kTransformer };

std::string arch_name(Arch a);
Arch arch_from_name(std::string_view name);

struct ModelConfig {
  Arch arch = Arch::kBirnnAttn;
  int embed_dim = 32;
  int hidden_dim = 32;
  int layers = 1;  // recurrent layers / transformer blocks
  int heads = 2;   // transformer only
  double word_dropout = 0.1;
  double dropout = 0.1;
  int max_len = 128;

  void validate() const;
  static ModelConfig defaults(Arch arch);
  // Canonical JSON of the architecture-defining fields.
  std::string canonical_json() const;
  // FNV-1a hash of canonical_json(), as hex. Architecture identity check.
  std::string arch_hash() const;
};

// Named parameter tensors in a fixed order.
class ParamStore {
 public:
  int add(const std::string& name, ad::Tensor value);
  int index_of(const std::string& name) const;
  bool contains(const std::string& name) const;
  ad::Tensor& tensor(int i) { return values_[static_cast<size_t>(i)]; }
  const ad::Tensor& tensor(int i) const { return values_[static_cast<size_t>(i)]; }
  ad::Tensor& tensor(const std::string& name) { return tensor(index_of(name)); }
  const ad::Tensor& tensor(const std::string& name) const { return tensor(index_of(name)); }
  const std::string& name(int i) const { return names_[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(values_.size()); }
  int64_t total_elements() const;

 private:
  std::vector<std::string> names_;
  std::vector<ad::Tensor> values_;
};

// Options for one graph construction.
struct ForwardOptions {
  bool params_require_grad = false;
  bool input_requires_grad = false;
  bool train_mode = false;  // enables dropout
  Rng* dropout_rng = nullptr;
  // Per-position attention mask (1 = real token, 0 = PAD). Empty = all ones.
  std::vector<double> key_mask;
};

struct ForwardGraph {
  ad::Tape tape;
  ad::Tape::NodeId logit = -1;          // [1,1]
  ad::Tape::NodeId input = -1;          // the [n,d] embedding node
  std::vector<ad::Tape::NodeId> params;  // aligned with ParamStore order
};

// A trained (or freshly initialized) classifier: embedding table plus
// classifier parameters, frozen and safely shareable once training is done.
class TrainedModel final : public Classifier {
 public:
  TrainedModel(ModelConfig config, Vocab vocab, ParamStore params);

  // Fresh model with seeded parameter initialization.
  static TrainedModel init(const ModelConfig& config, const Vocab& vocab, uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const ParamStore& params() const { return params_; }
  ParamStore& mutable_params() { return params_; }

  const Vocab& vocab() const override { return vocab_; }
  int max_len() const override { return config_.max_len; }
  ad::Tensor embed(std::span<const int> tokens) const override;
  double logit_from_embeddings(const ad::Tensor& x) const override;
  LogitGrad logit_and_grad(const ad::Tensor& x) const override;
  Prediction predict(std::span<const int> tokens) const override;

  // Graph from token ids (embedding-gather path; used by training).
  ForwardGraph forward_from_tokens(std::span<const int> tokens, const ForwardOptions& opts) const;
  // Graph from an explicit embedding sequence.
  ForwardGraph forward_graph(const ad::Tensor& x, const ForwardOptions& opts) const;

 private:
  void check_tokens(std::span<const int> tokens) const;

  ModelConfig config_;
  Vocab vocab_;
  ParamStore params_;
};

// Deterministic, seeded parameter initialization for the given architecture.
ParamStore init_params(const ModelConfig& config, int vocab_size, uint64_t seed);

}  // namespace salieval
