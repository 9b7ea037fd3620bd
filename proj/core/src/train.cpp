#include "salieval/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace salieval {

std::string optimizer_name(Optimizer o) {
  return o == Optimizer::kSgdMomentum ? "sgd_momentum" : "adam";
}

Optimizer optimizer_from_name(std::string_view name) {
  if (name == "sgd_momentum") return Optimizer::kSgdMomentum;
  if (name == "adam") return Optimizer::kAdam;
  throw ConfigError("unknown optimizer: " + std::string(name));
}

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ValidationError("train: learning_rate must be positive");
  if (momentum < 0.0 || momentum >= 1.0) throw ValidationError("train: momentum must be in [0,1)");
  if (weight_decay < 0.0) throw ValidationError("train: weight_decay must be non-negative");
  if (batch_size <= 0 || max_steps <= 0) throw ValidationError("train: sizes must be positive");
  if (patience <= 0 || patience > max_steps)
    throw ValidationError("train: patience must be in [1, max_steps]");
  if (eval_every <= 0) throw ValidationError("train: eval_every must be positive");
}

TrainConfig TrainConfig::defaults(Arch arch) {
  TrainConfig cfg;
  if (arch == Arch::kBirnnAttn) {
    cfg.optimizer = Optimizer::kSgdMomentum;
    cfg.learning_rate = 0.1;
    cfg.momentum = 0.9;
  } else {
    cfg.optimizer = Optimizer::kAdam;
    cfg.learning_rate = 1e-3;
  }
  return cfg;
}

namespace {

struct OptimizerState {
  std::vector<ad::Tensor> m;  // momentum / first moment
  std::vector<ad::Tensor> v;  // second moment (adam)
  int64_t t = 0;
};

void apply_update(ParamStore& params, std::vector<ad::Tensor>& grads, OptimizerState& state,
                  const TrainConfig& cfg) {
  ++state.t;
  for (int i = 0; i < params.size(); ++i) {
    ad::Tensor& theta = params.tensor(i);
    ad::Tensor& g = grads[static_cast<size_t>(i)];
    if (cfg.weight_decay > 0.0)
      for (int64_t j = 0; j < g.size(); ++j) g.at(j) += cfg.weight_decay * theta.at(j);
    if (cfg.optimizer == Optimizer::kSgdMomentum) {
      ad::Tensor& m = state.m[static_cast<size_t>(i)];
      for (int64_t j = 0; j < g.size(); ++j) {
        m.at(j) = cfg.momentum * m.at(j) + g.at(j);
        theta.at(j) -= cfg.learning_rate * m.at(j);
      }
    } else {
      constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
      ad::Tensor& m = state.m[static_cast<size_t>(i)];
      ad::Tensor& v = state.v[static_cast<size_t>(i)];
      const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
      const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
      for (int64_t j = 0; j < g.size(); ++j) {
        m.at(j) = b1 * m.at(j) + (1.0 - b1) * g.at(j);
        v.at(j) = b2 * v.at(j) + (1.0 - b2) * g.at(j) * g.at(j);
        theta.at(j) -= cfg.learning_rate * (m.at(j) / bc1) / (std::sqrt(v.at(j) / bc2) + eps);
      }
    }
  }
}

std::vector<int> word_dropout_tokens(const std::vector<int>& tokens, double rate, Rng& rng) {
  std::vector<int> out = tokens;
  if (rate <= 0.0) return out;
  for (size_t i = 1; i + 1 < out.size(); ++i)
    if (Vocab::is_content(out[i]) && rng.bernoulli(rate)) out[i] = Vocab::kUnk;
  return out;
}

}  // namespace

TrainResult train(const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const Corpus& corpus) {
  model_cfg.validate();
  train_cfg.validate();
  if (corpus.train.empty() || corpus.validation.empty())
    throw ContractError("train: corpus needs non-empty train and validation splits");

  TrainResult result{TrainedModel::init(model_cfg, corpus.vocab, train_cfg.seed), {}, 0.0, 0};
  ParamStore& params = result.model.mutable_params();

  OptimizerState state;
  state.m.reserve(static_cast<size_t>(params.size()));
  state.v.reserve(static_cast<size_t>(params.size()));
  for (int i = 0; i < params.size(); ++i) {
    state.m.emplace_back(params.tensor(i).shape());
    state.v.emplace_back(params.tensor(i).shape());
  }

  Rng order_rng(mix_seed(train_cfg.seed, "order"));
  Rng dropout_rng(mix_seed(train_cfg.seed, "dropout"));
  std::vector<int> order(corpus.train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  order_rng.shuffle(order);
  size_t cursor = 0;

  std::vector<ad::Tensor> grads;
  grads.reserve(static_cast<size_t>(params.size()));
  for (int i = 0; i < params.size(); ++i) grads.emplace_back(params.tensor(i).shape());

  ParamStore best = result.model.params();
  double loss_sum = 0.0;
  int loss_count = 0;

  for (int step = 1; step <= train_cfg.max_steps; ++step) {
    for (auto& g : grads) g.fill(0.0);
    double batch_loss = 0.0;
    for (int b = 0; b < train_cfg.batch_size; ++b) {
      if (cursor >= order.size()) {
        order_rng.shuffle(order);
        cursor = 0;
      }
      const Example& ex = corpus.train[static_cast<size_t>(order[cursor++])];
      const std::vector<int> tokens =
          word_dropout_tokens(ex.tokens, model_cfg.word_dropout, dropout_rng);
      try {
        ForwardOptions opts;
        opts.params_require_grad = true;
        opts.train_mode = true;
        opts.dropout_rng = &dropout_rng;
        ForwardGraph g = result.model.forward_from_tokens(tokens, opts);
        // BCE with logits: log(1 + e^z) - y z
        ad::Tape::NodeId loss = g.tape.softplus(g.logit);
        if (ex.label == 1) loss = g.tape.add(loss, g.tape.scale(g.logit, -1.0));
        const double loss_value = g.tape.value(loss).item();
        if (!std::isfinite(loss_value))
          throw NumericError("loss is not finite");
        batch_loss += loss_value;
        g.tape.backward(loss);
        for (int i = 0; i < params.size(); ++i)
          grads[static_cast<size_t>(i)].add_in_place(g.tape.grad(g.params[static_cast<size_t>(i)]));
      } catch (const NumericError& e) {
        throw TrainingError("training diverged at step " + std::to_string(step) + ": " + e.what());
      }
    }
    const double inv_batch = 1.0 / static_cast<double>(train_cfg.batch_size);
    for (auto& g : grads) g.scale_in_place(inv_batch);
    apply_update(params, grads, state, train_cfg);
    loss_sum += batch_loss * inv_batch;
    ++loss_count;

    if (step % train_cfg.eval_every == 0 || step == train_cfg.max_steps) {
      double val_acc;
      try {
        val_acc = accuracy(result.model, corpus.validation);
      } catch (const NumericError& e) {
        throw TrainingError("training diverged at step " + std::to_string(step) + ": " + e.what());
      }
      result.history.push_back({step, loss_sum / std::max(loss_count, 1), val_acc});
      loss_sum = 0.0;
      loss_count = 0;
      if (val_acc > result.best_val_acc) {
        result.best_val_acc = val_acc;
        result.best_step = step;
        best = params;
      }
      if (step - result.best_step >= train_cfg.patience) break;
    }
  }

  params = std::move(best);
  return result;
}

void save_history_csv(const std::string& path, const std::vector<TrainHistoryEntry>& history) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "step,loss,val_acc\n";
  char buf[96];
  for (const auto& h : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", h.step, h.loss, h.val_acc);
    out << buf;
  }
}

}  // namespace salieval
