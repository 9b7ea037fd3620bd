#pragma once

#include <functional>
#include <vector>

#include "salieval/rng.hpp"
#include "salieval/tensor.hpp"

namespace salieval::ad {

// Define-by-run reverse-mode tape over rank-2 tensors. Ops execute eagerly,
// append one node each, and record a closure that scatters the node's
// gradient into its parents. Node order is construction order, so a single
// reverse sweep visits every node after the output exactly once.
//
// Gradients are allocated lazily; a node whose gradient slot is still empty
// when the sweep reaches it received no contribution and is skipped.
class Tape {
 public:
  using NodeId = int;

  NodeId input(Tensor value, bool requires_grad = false);

  NodeId matmul(NodeId a, NodeId b);
  // Same-shape elementwise add, or bias-row broadcast ([n,d] + [1,d]).
  NodeId add(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId scale(NodeId a, double c);
  NodeId sigmoid(NodeId a);
  NodeId tanh(NodeId a);
  NodeId softplus(NodeId a);
  // Softmax along each row.
  NodeId softmax_rows(NodeId a);
  // Embedding gather: rows of `table` selected by token id.
  NodeId gather_rows(NodeId table, std::vector<int> ids);
  NodeId concat_rows(const std::vector<NodeId>& parts);
  NodeId concat_cols(NodeId a, NodeId b);
  NodeId slice_rows(NodeId a, int64_t start, int64_t count);
  NodeId transpose(NodeId a);
  NodeId sum_all(NodeId a);
  NodeId mean_all(NodeId a);
  // Per-row layer normalization with learned gain/bias rows.
  NodeId layer_norm(NodeId x, NodeId gain, NodeId bias, double eps = 1e-5);
  // Inverted dropout with a mask drawn from `rng`; identity when rate <= 0.
  NodeId dropout(NodeId a, double rate, Rng& rng);

  const Tensor& value(NodeId id) const { return node(id).value; }
  // Valid after backward(); zeros if nothing flowed into the node.
  const Tensor& grad(NodeId id) const;

  // Seeds d(out)/d(out) = 1 and sweeps the tape once. `out` must be scalar.
  void backward(NodeId out);
  bool backward_has_run() const { return backward_done_; }

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;  // empty until a contribution arrives
    bool requires_grad = false;
    std::function<void(Tape&)> backward_fn;  // empty for leaves
  };

  const Node& node(NodeId id) const;
  Node& node(NodeId id);
  NodeId push(Tensor value, bool requires_grad, std::function<void(Tape&)> fn);
  // Gradient accumulation target, allocated zero-filled on first use.
  Tensor& grad_buf(NodeId id);

  std::vector<Node> nodes_;
  bool backward_done_ = false;
  Tensor empty_grad_;  // lazily sized zero tensor returned for untouched nodes
};

// Scaled dot-product attention composed from tape primitives:
// softmax(q kᵀ / sqrt(d_k) + bias) v. `bias` may be -1 (no additive mask).
Tape::NodeId scaled_dot_attention(Tape& t, Tape::NodeId q, Tape::NodeId k, Tape::NodeId v,
                                  Tape::NodeId bias = -1);

// Max relative error between `grad_f(x)` and central finite differences of
// `f` around `x`. The denominator is max(|analytic|, |numeric|, 1e-8).
double finite_diff_check(const std::function<double(const Tensor&)>& f,
                         const std::function<Tensor(const Tensor&)>& grad_f, const Tensor& x,
                         double eps);

}  // namespace salieval::ad
