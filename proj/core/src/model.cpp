#include "salieval/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace salieval {

std::string objective_name(Objective o) {
  return o == Objective::kLogit ? "logit" : "prob";
}

Objective objective_from_name(std::string_view name) {
  if (name == "logit") return Objective::kLogit;
  if (name == "prob") return Objective::kProb;
  throw ConfigError("unknown objective: " + std::string(name));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Prediction Classifier::predict(std::span<const int> tokens) const {
  Prediction p;
  p.logit = logit_from_embeddings(embed(tokens));
  p.prob = sigmoid(p.logit);
  p.predicted_class = p.prob >= 0.5 ? 1 : 0;
  return p;
}

ad::Tensor grad_embeddings(const Classifier& model, std::span<const int> tokens,
                           Objective objective, int cls) {
  if (cls != 0 && cls != 1) throw ContractError("grad_embeddings: class must be 0 or 1");
  auto lg = model.logit_and_grad(model.embed(tokens));
  double factor = cls == 1 ? 1.0 : -1.0;
  if (objective == Objective::kProb) {
    const double p = sigmoid(lg.logit);
    factor *= p * (1.0 - p);  // sigma'(f) is the same for both classes
  }
  lg.grad.scale_in_place(factor);
  return std::move(lg.grad);
}

double accuracy(const Classifier& model, const std::vector<Example>& examples) {
  if (examples.empty()) throw ContractError("accuracy: empty example set");
  int64_t correct = 0;
  for (const Example& ex : examples)
    if (model.predict(ex.tokens).predicted_class == ex.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

std::string arch_name(Arch a) {
  return a == Arch::kBirnnAttn ? "birnn_attn" : "transformer";
}

Arch arch_from_name(std::string_view name) {
  if (name == "birnn_attn") return Arch::kBirnnAttn;
  if (name == "transformer") return Arch::kTransformer;
  throw ConfigError("unknown architecture: " + std::string(name));
}

void ModelConfig::validate() const {
  if (embed_dim <= 0 || hidden_dim <= 0 || layers <= 0 || max_len <= 4)
    throw ValidationError("model: dimensions must be positive");
  if (arch == Arch::kTransformer) {
    if (heads <= 0 || hidden_dim % heads != 0)
      throw ValidationError("model: heads must divide hidden_dim");
  }
  if (word_dropout < 0.0 || word_dropout >= 1.0 || dropout < 0.0 || dropout >= 1.0)
    throw ValidationError("model: dropout rates must be in [0,1)");
}

ModelConfig ModelConfig::defaults(Arch arch) {
  ModelConfig cfg;
  cfg.arch = arch;
  cfg.layers = arch == Arch::kTransformer ? 2 : 1;
  return cfg;
}

std::string ModelConfig::canonical_json() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"arch\":\"%s\",\"embed_dim\":%d,\"heads\":%d,\"hidden_dim\":%d,"
                "\"layers\":%d,\"max_len\":%d}",
                arch_name(arch).c_str(), embed_dim, heads, hidden_dim, layers, max_len);
  return buf;
}

std::string ModelConfig::arch_hash() const {
  const uint64_t h = hash_tag(canonical_json());
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int ParamStore::add(const std::string& name, ad::Tensor value) {
  if (contains(name)) throw ContractError("duplicate parameter: " + name);
  names_.push_back(name);
  values_.push_back(std::move(value));
  return static_cast<int>(values_.size()) - 1;
}

int ParamStore::index_of(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw ContractError("unknown parameter: " + name);
}

bool ParamStore::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

int64_t ParamStore::total_elements() const {
  int64_t n = 0;
  for (const auto& t : values_) n += t.size();
  return n;
}

namespace {

ad::Tensor xavier(Rng& rng, int64_t rows, int64_t cols) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  ad::Tensor t(rows, cols);
  for (int64_t i = 0; i < t.size(); ++i) t.at(i) = rng.uniform(-a, a);
  return t;
}

ad::Tensor gaussian(Rng& rng, int64_t rows, int64_t cols, double stddev) {
  ad::Tensor t(rows, cols);
  for (int64_t i = 0; i < t.size(); ++i) t.at(i) = rng.normal(0.0, stddev);
  return t;
}

std::string layer_name(const char* prefix, int layer, const char* suffix) {
  return std::string(prefix) + std::to_string(layer) + "." + suffix;
}

}  // namespace

ParamStore init_params(const ModelConfig& cfg, int vocab_size, uint64_t seed) {
  cfg.validate();
  Rng rng(mix_seed(seed, "init", hash_tag(arch_name(cfg.arch))));
  ParamStore p;
  const int d = cfg.embed_dim;
  const int h = cfg.hidden_dim;
  p.add("embedding", gaussian(rng, vocab_size, d, 0.1));
  if (cfg.arch == Arch::kBirnnAttn) {
    for (int l = 0; l < cfg.layers; ++l) {
      const int in = l == 0 ? d : 2 * h;
      for (const char* dir : {"fwd", "bwd"}) {
        p.add(layer_name("rnn", l, dir) + ".wx", xavier(rng, in, h));
        p.add(layer_name("rnn", l, dir) + ".wh", xavier(rng, h, h));
        p.add(layer_name("rnn", l, dir) + ".b", ad::Tensor(1, h));
      }
    }
    p.add("attn.w", xavier(rng, 2 * h, h));
    p.add("attn.b", ad::Tensor(1, h));
    p.add("attn.v", xavier(rng, h, 1));
    p.add("mlp.w1", xavier(rng, 2 * h, h));
    p.add("mlp.b1", ad::Tensor(1, h));
    p.add("mlp.w2", xavier(rng, h, 1));
    p.add("mlp.b2", ad::Tensor(1, 1));
  } else {
    const int hd = h / cfg.heads;
    const int ffn = 2 * h;
    p.add("pos", gaussian(rng, cfg.max_len, d, 0.05));
    for (int l = 0; l < cfg.layers; ++l) {
      p.add(layer_name("tf", l, "ln1.g"), ad::Tensor::full(1, d, 1.0));
      p.add(layer_name("tf", l, "ln1.b"), ad::Tensor(1, d));
      for (int head = 0; head < cfg.heads; ++head) {
        const std::string hp = layer_name("tf", l, "attn.h") + std::to_string(head);
        p.add(hp + ".wq", xavier(rng, d, hd));
        p.add(hp + ".wk", xavier(rng, d, hd));
        p.add(hp + ".wv", xavier(rng, d, hd));
      }
      p.add(layer_name("tf", l, "attn.wo"), xavier(rng, h, d));
      p.add(layer_name("tf", l, "ln2.g"), ad::Tensor::full(1, d, 1.0));
      p.add(layer_name("tf", l, "ln2.b"), ad::Tensor(1, d));
      p.add(layer_name("tf", l, "ffn.w1"), xavier(rng, d, ffn));
      p.add(layer_name("tf", l, "ffn.b1"), ad::Tensor(1, ffn));
      p.add(layer_name("tf", l, "ffn.w2"), xavier(rng, ffn, d));
      p.add(layer_name("tf", l, "ffn.b2"), ad::Tensor(1, d));
    }
    p.add("final_ln.g", ad::Tensor::full(1, d, 1.0));
    p.add("final_ln.b", ad::Tensor(1, d));
    p.add("head.w", xavier(rng, d, 1));
    p.add("head.b", ad::Tensor(1, 1));
  }
  return p;
}

TrainedModel::TrainedModel(ModelConfig config, Vocab vocab, ParamStore params)
    : config_(std::move(config)), vocab_(std::move(vocab)), params_(std::move(params)) {
  config_.validate();
  if (params_.tensor("embedding").rows() != vocab_.size())
    throw ValidationError("model: embedding table does not match vocabulary size");
}

TrainedModel TrainedModel::init(const ModelConfig& config, const Vocab& vocab, uint64_t seed) {
  return TrainedModel(config, vocab, init_params(config, vocab.size(), seed));
}

void TrainedModel::check_tokens(std::span<const int> tokens) const {
  if (tokens.empty()) throw ContractError("empty token sequence");
  if (static_cast<int>(tokens.size()) > config_.max_len)
    throw LengthError("sequence length " + std::to_string(tokens.size()) + " exceeds max_len " +
                      std::to_string(config_.max_len));
  for (int t : tokens)
    if (t < 0 || t >= vocab_.size())
      throw VocabError("token id out of range: " + std::to_string(t));
}

ad::Tensor TrainedModel::embed(std::span<const int> tokens) const {
  check_tokens(tokens);
  const ad::Tensor& table = params_.tensor("embedding");
  const int64_t d = table.cols();
  ad::Tensor out(static_cast<int64_t>(tokens.size()), d);
  for (size_t i = 0; i < tokens.size(); ++i)
    std::copy_n(table.data() + static_cast<int64_t>(tokens[i]) * d, d,
                out.data() + static_cast<int64_t>(i) * d);
  return out;
}

namespace {

using NodeId = ad::Tape::NodeId;

struct BuildContext {
  ad::Tape* tape;
  const ModelConfig* cfg;
  std::vector<NodeId> params;
  const std::vector<std::string>* names;
  const ForwardOptions* opts;

  NodeId param(const std::string& name) const {
    for (size_t i = 0; i < names->size(); ++i)
      if ((*names)[i] == name) return params[i];
    throw ContractError("graph: unknown parameter " + name);
  }
  NodeId maybe_dropout(NodeId x) const {
    if (!opts->train_mode || opts->dropout_rng == nullptr || cfg->dropout <= 0.0) return x;
    return tape->dropout(x, cfg->dropout, *opts->dropout_rng);
  }
  bool has_pad() const {
    for (double m : opts->key_mask)
      if (m == 0.0) return true;
    return false;
  }
};

NodeId build_birnn(BuildContext& ctx, NodeId x, int64_t n) {
  ad::Tape& t = *ctx.tape;
  const ModelConfig& cfg = *ctx.cfg;
  const int h = cfg.hidden_dim;
  const bool pad = ctx.has_pad();
  NodeId seq = x;
  for (int l = 0; l < cfg.layers; ++l) {
    std::vector<NodeId> fwd_states(static_cast<size_t>(n));
    std::vector<NodeId> bwd_states(static_cast<size_t>(n));
    for (const char* dir : {"fwd", "bwd"}) {
      const std::string prefix = "rnn" + std::to_string(l) + "." + dir + ".";
      const NodeId wx = ctx.param(prefix + "wx");
      const NodeId wh = ctx.param(prefix + "wh");
      const NodeId b = ctx.param(prefix + "b");
      NodeId state = t.input(ad::Tensor(1, h));
      const bool forward = dir[0] == 'f';
      auto& states = forward ? fwd_states : bwd_states;
      for (int64_t step = 0; step < n; ++step) {
        const int64_t i = forward ? step : n - 1 - step;
        const NodeId xi = t.slice_rows(seq, i, 1);
        NodeId next = t.tanh(t.add(t.add(t.matmul(xi, wx), t.matmul(state, wh)), b));
        if (pad) {
          // PAD positions pass the previous state through unchanged.
          const double m = ctx.opts->key_mask[static_cast<size_t>(i)];
          next = t.add(t.scale(next, m), t.scale(state, 1.0 - m));
        }
        state = next;
        states[static_cast<size_t>(i)] = state;
      }
    }
    std::vector<NodeId> rows(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i)
      rows[static_cast<size_t>(i)] =
          t.concat_cols(fwd_states[static_cast<size_t>(i)], bwd_states[static_cast<size_t>(i)]);
    seq = t.concat_rows(rows);
  }
  // Keys-only attention: scores from the states alone, then pooled.
  NodeId scores = t.matmul(t.tanh(t.add(t.matmul(seq, ctx.param("attn.w")), ctx.param("attn.b"))),
                           ctx.param("attn.v"));
  NodeId scores_row = t.transpose(scores);  // [1,n]
  if (pad) {
    ad::Tensor bias(1, n);
    for (int64_t i = 0; i < n; ++i)
      bias.at(0, i) = ctx.opts->key_mask[static_cast<size_t>(i)] == 0.0 ? -1e9 : 0.0;
    scores_row = t.add(scores_row, t.input(std::move(bias)));
  }
  const NodeId alpha = t.softmax_rows(scores_row);
  NodeId pooled = ctx.maybe_dropout(t.matmul(alpha, seq));  // [1,2h]
  NodeId hidden = ctx.maybe_dropout(
      t.tanh(t.add(t.matmul(pooled, ctx.param("mlp.w1")), ctx.param("mlp.b1"))));
  return t.add(t.matmul(hidden, ctx.param("mlp.w2")), ctx.param("mlp.b2"));
}

NodeId build_transformer(BuildContext& ctx, NodeId x, int64_t n) {
  ad::Tape& t = *ctx.tape;
  const ModelConfig& cfg = *ctx.cfg;
  const bool pad = ctx.has_pad();
  NodeId bias = -1;
  if (pad) {
    ad::Tensor b(n, n);
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < n; ++j)
        b.at(i, j) = ctx.opts->key_mask[static_cast<size_t>(j)] == 0.0 ? -1e9 : 0.0;
    bias = t.input(std::move(b));
  }
  NodeId h = t.add(x, t.slice_rows(ctx.param("pos"), 0, n));
  for (int l = 0; l < cfg.layers; ++l) {
    const std::string lp = "tf" + std::to_string(l) + ".";
    const NodeId a = t.layer_norm(h, ctx.param(lp + "ln1.g"), ctx.param(lp + "ln1.b"));
    std::vector<NodeId> heads(static_cast<size_t>(cfg.heads));
    for (int head = 0; head < cfg.heads; ++head) {
      const std::string hp = lp + "attn.h" + std::to_string(head) + ".";
      heads[static_cast<size_t>(head)] = scaled_dot_attention(
          t, t.matmul(a, ctx.param(hp + "wq")), t.matmul(a, ctx.param(hp + "wk")),
          t.matmul(a, ctx.param(hp + "wv")), bias);
    }
    NodeId merged = heads[0];
    for (int head = 1; head < cfg.heads; ++head)
      merged = t.concat_cols(merged, heads[static_cast<size_t>(head)]);
    h = t.add(h, ctx.maybe_dropout(t.matmul(merged, ctx.param(lp + "attn.wo"))));
    const NodeId f = t.layer_norm(h, ctx.param(lp + "ln2.g"), ctx.param(lp + "ln2.b"));
    const NodeId inner = t.tanh(t.add(t.matmul(f, ctx.param(lp + "ffn.w1")), ctx.param(lp + "ffn.b1")));
    h = t.add(h, ctx.maybe_dropout(
                     t.add(t.matmul(inner, ctx.param(lp + "ffn.w2")), ctx.param(lp + "ffn.b2"))));
  }
  const NodeId fin = t.layer_norm(h, ctx.param("final_ln.g"), ctx.param("final_ln.b"));
  const NodeId cls = t.slice_rows(fin, 0, 1);  // pooled BOS position
  return t.add(t.matmul(cls, ctx.param("head.w")), ctx.param("head.b"));
}

}  // namespace

ForwardGraph TrainedModel::forward_graph(const ad::Tensor& x, const ForwardOptions& opts) const {
  if (x.ndim() != 2 || x.cols() != config_.embed_dim)
    throw ShapeError("forward: embedding width does not match the model");
  if (x.rows() > config_.max_len)
    throw LengthError("sequence length " + std::to_string(x.rows()) + " exceeds max_len " +
                      std::to_string(config_.max_len));
  if (!opts.key_mask.empty() && static_cast<int64_t>(opts.key_mask.size()) != x.rows())
    throw ShapeError("forward: key_mask length mismatch");

  ForwardGraph g;
  BuildContext ctx;
  ctx.tape = &g.tape;
  ctx.cfg = &config_;
  ctx.opts = &opts;
  std::vector<std::string> names(static_cast<size_t>(params_.size()));
  g.params.resize(static_cast<size_t>(params_.size()));
  for (int i = 0; i < params_.size(); ++i) {
    names[static_cast<size_t>(i)] = params_.name(i);
    g.params[static_cast<size_t>(i)] =
        g.tape.input(params_.tensor(i), opts.params_require_grad);
  }
  ctx.names = &names;
  ctx.params = g.params;
  g.input = g.tape.input(x, opts.input_requires_grad);
  g.logit = config_.arch == Arch::kBirnnAttn ? build_birnn(ctx, g.input, x.rows())
                                             : build_transformer(ctx, g.input, x.rows());
  return g;
}

ForwardGraph TrainedModel::forward_from_tokens(std::span<const int> tokens,
                                               const ForwardOptions& opts) const {
  check_tokens(tokens);
  ForwardGraph g;
  BuildContext ctx;
  ctx.tape = &g.tape;
  ctx.cfg = &config_;
  ctx.opts = &opts;
  std::vector<std::string> names(static_cast<size_t>(params_.size()));
  g.params.resize(static_cast<size_t>(params_.size()));
  for (int i = 0; i < params_.size(); ++i) {
    names[static_cast<size_t>(i)] = params_.name(i);
    g.params[static_cast<size_t>(i)] =
        g.tape.input(params_.tensor(i), opts.params_require_grad);
  }
  ctx.names = &names;
  ctx.params = g.params;
  g.input = g.tape.gather_rows(ctx.param("embedding"),
                               std::vector<int>(tokens.begin(), tokens.end()));
  g.logit = config_.arch == Arch::kBirnnAttn
                ? build_birnn(ctx, g.input, static_cast<int64_t>(tokens.size()))
                : build_transformer(ctx, g.input, static_cast<int64_t>(tokens.size()));
  return g;
}

double TrainedModel::logit_from_embeddings(const ad::Tensor& x) const {
  ForwardGraph g = forward_graph(x, ForwardOptions{});
  return g.tape.value(g.logit).item();
}

Classifier::LogitGrad TrainedModel::logit_and_grad(const ad::Tensor& x) const {
  ForwardOptions opts;
  opts.input_requires_grad = true;
  ForwardGraph g = forward_graph(x, opts);
  LogitGrad out;
  out.logit = g.tape.value(g.logit).item();
  g.tape.backward(g.logit);
  out.grad = g.tape.grad(g.input);
  return out;
}

Prediction TrainedModel::predict(std::span<const int> tokens) const {
  ForwardOptions opts;
  bool has_pad = false;
  for (int t : tokens) has_pad = has_pad || t == Vocab::kPad;
  if (has_pad) {
    opts.key_mask.resize(tokens.size(), 1.0);
    for (size_t i = 0; i < tokens.size(); ++i)
      if (tokens[i] == Vocab::kPad) opts.key_mask[i] = 0.0;
  }
  ForwardGraph g = forward_from_tokens(tokens, opts);
  Prediction p;
  p.logit = g.tape.value(g.logit).item();
  p.prob = sigmoid(p.logit);
  p.predicted_class = p.prob >= 0.5 ? 1 : 0;
  return p;
}

}  // namespace salieval
