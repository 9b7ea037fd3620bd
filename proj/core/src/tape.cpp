#include "salieval/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace salieval::ad {

namespace {

// c[m,n] += a[m,k] * b[k,n]
void mm_acc(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (int64_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c[m,n] += a[k,m]ᵀ * b[k,n]
void mm_at_b_acc(const double* a, const double* b, double* c, int64_t k, int64_t m, int64_t n) {
  for (int64_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (int64_t i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c[m,k] += a[m,n] * b[k,n]ᵀ
void mm_a_bt_acc(const double* a, const double* b, double* c, int64_t m, int64_t n, int64_t k) {
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = a + i * n;
    double* crow = c + i * k;
    for (int64_t p = 0; p < k; ++p) {
      const double* brow = b + p * n;
      double s = 0.0;
      for (int64_t j = 0; j < n; ++j) s += arow[j] * brow[j];
      crow[p] += s;
    }
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  // log(1 + e^x) = max(x, 0) + log1p(e^{-|x|})
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

const Tape::Node& Tape::node(NodeId id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
    throw ContractError("tape: invalid node id " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

Tape::Node& Tape::node(NodeId id) { return const_cast<Node&>(static_cast<const Tape&>(*this).node(id)); }

Tape::NodeId Tape::push(Tensor value, bool requires_grad, std::function<void(Tape&)> fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward_fn = std::move(fn);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Tensor& Tape::grad_buf(NodeId id) {
  Node& n = node(id);
  if (n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

const Tensor& Tape::grad(NodeId id) const {
  if (!backward_done_) throw ContractError("grad() requested before backward() has run");
  const Node& n = node(id);
  if (!n.grad.empty()) return n.grad;
  if (empty_grad_.shape() != n.value.shape())
    const_cast<Tape*>(this)->empty_grad_ = Tensor(n.value.shape());
  return empty_grad_;
}

void Tape::backward(NodeId out) {
  if (backward_done_) throw ContractError("backward() already ran on this tape");
  const Node& o = node(out);
  if (o.value.size() != 1) throw ContractError("backward() requires a scalar output node");
  if (!o.requires_grad)
    throw ContractError("backward(): output does not depend on any differentiable input");
  grad_buf(out).at(0) = 1.0;
  backward_done_ = true;  // set before the sweep so closures may call grad_buf
  for (NodeId id = out; id >= 0; --id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (!n.requires_grad || !n.backward_fn) continue;
    if (n.grad.empty()) continue;
    n.backward_fn(*this);
  }
}

Tape::NodeId Tape::input(Tensor value, bool requires_grad) {
  value.ensure_finite("input");
  return push(std::move(value), requires_grad, {});
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
  const Tensor& av = node(a).value;
  const Tensor& bv = node(b).value;
  if (av.ndim() != 2 || bv.ndim() != 2 || av.cols() != bv.rows())
    throw ShapeError("matmul: incompatible shapes");
  const int64_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out(m, n);
  mm_acc(av.data(), bv.data(), out.data(), m, k, n);
  out.ensure_finite("matmul");
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, b, id, m, k, n](Tape& t) {
      const Tensor& g = t.node(id).grad;
      if (t.node(a).requires_grad)
        mm_a_bt_acc(g.data(), t.node(b).value.data(), t.grad_buf(a).data(), m, n, k);
      if (t.node(b).requires_grad)
        mm_at_b_acc(t.node(a).value.data(), g.data(), t.grad_buf(b).data(), m, k, n);
    };
  }
  return id;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  const Tensor& av = node(a).value;
  const Tensor& bv = node(b).value;
  const bool same = av.same_shape(bv);
  const bool bias = !same && av.ndim() == 2 && bv.ndim() == 2 && bv.rows() == 1 &&
                    av.cols() == bv.cols();
  if (!same && !bias) throw ShapeError("add: shape mismatch (only bias-row broadcast allowed)");
  Tensor out = av;
  if (same) {
    out.add_in_place(bv);
  } else {
    const int64_t n = av.rows(), d = av.cols();
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < d; ++j) out.at(i, j) += bv.at(0, j);
  }
  out.ensure_finite("add");
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, b, id, same](Tape& t) {
      const Tensor& g = t.node(id).grad;
      if (t.node(a).requires_grad) t.grad_buf(a).add_in_place(g);
      if (t.node(b).requires_grad) {
        Tensor& gb = t.grad_buf(b);
        if (same) {
          gb.add_in_place(g);
        } else {
          const int64_t n = g.rows(), d = g.cols();
          for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < d; ++j) gb.at(0, j) += g.at(i, j);
        }
      }
    };
  }
  return id;
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
  const Tensor& av = node(a).value;
  const Tensor& bv = node(b).value;
  if (!av.same_shape(bv)) throw ShapeError("mul: shape mismatch");
  Tensor out = av;
  for (int64_t i = 0; i < out.size(); ++i) out.at(i) *= bv.at(i);
  out.ensure_finite("mul");
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, b, id](Tape& t) {
      const Tensor& g = t.node(id).grad;
      if (t.node(a).requires_grad) {
        Tensor& ga = t.grad_buf(a);
        const Tensor& bv2 = t.node(b).value;
        for (int64_t i = 0; i < g.size(); ++i) ga.at(i) += g.at(i) * bv2.at(i);
      }
      if (t.node(b).requires_grad) {
        Tensor& gb = t.grad_buf(b);
        const Tensor& av2 = t.node(a).value;
        for (int64_t i = 0; i < g.size(); ++i) gb.at(i) += g.at(i) * av2.at(i);
      }
    };
  }
  return id;
}

Tape::NodeId Tape::scale(NodeId a, double c) {
  Tensor out = node(a).value;
  out.scale_in_place(c);
  out.ensure_finite("scale");
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id, c](Tape& t) {
      const Tensor& g = t.node(id).grad;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < g.size(); ++i) ga.at(i) += c * g.at(i);
    };
  }
  return id;
}

Tape::NodeId Tape::sigmoid(NodeId a) {
  Tensor out = node(a).value;
  for (int64_t i = 0; i < out.size(); ++i) out.at(i) = stable_sigmoid(out.at(i));
  out.ensure_finite("sigmoid");
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id](Tape& t) {
      const Tensor& g = t.node(id).grad;
      const Tensor& y = t.node(id).value;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < g.size(); ++i) ga.at(i) += g.at(i) * y.at(i) * (1.0 - y.at(i));
    };
  }
  return id;
}

Tape::NodeId Tape::tanh(NodeId a) {
  Tensor out = node(a).value;
  for (int64_t i = 0; i < out.size(); ++i) out.at(i) = std::tanh(out.at(i));
  out.ensure_finite("tanh");
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id](Tape& t) {
      const Tensor& g = t.node(id).grad;
      const Tensor& y = t.node(id).value;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < g.size(); ++i) ga.at(i) += g.at(i) * (1.0 - y.at(i) * y.at(i));
    };
  }
  return id;
}

Tape::NodeId Tape::softplus(NodeId a) {
  Tensor out = node(a).value;
  for (int64_t i = 0; i < out.size(); ++i) out.at(i) = stable_softplus(out.at(i));
  out.ensure_finite("softplus");
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id](Tape& t) {
      const Tensor& g = t.node(id).grad;
      const Tensor& x = t.node(a).value;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < g.size(); ++i) ga.at(i) += g.at(i) * stable_sigmoid(x.at(i));
    };
  }
  return id;
}

Tape::NodeId Tape::softmax_rows(NodeId a) {
  const Tensor& av = node(a).value;
  if (av.ndim() != 2) throw ShapeError("softmax_rows: tensor is not rank 2");
  Tensor out = av;
  const int64_t n = av.rows(), d = av.cols();
  for (int64_t i = 0; i < n; ++i) {
    double mx = out.at(i, 0);
    for (int64_t j = 1; j < d; ++j) mx = std::max(mx, out.at(i, j));
    double s = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      out.at(i, j) = std::exp(out.at(i, j) - mx);
      s += out.at(i, j);
    }
    for (int64_t j = 0; j < d; ++j) out.at(i, j) /= s;
  }
  out.ensure_finite("softmax");
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id, n, d](Tape& t) {
      const Tensor& g = t.node(id).grad;
      const Tensor& y = t.node(id).value;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (int64_t j = 0; j < d; ++j) dot += g.at(i, j) * y.at(i, j);
        for (int64_t j = 0; j < d; ++j) ga.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
      }
    };
  }
  return id;
}

Tape::NodeId Tape::gather_rows(NodeId table, std::vector<int> ids) {
  const Tensor& tv = node(table).value;
  if (tv.ndim() != 2) throw ShapeError("gather_rows: table is not rank 2");
  const int64_t vocab = tv.rows(), d = tv.cols();
  Tensor out(static_cast<int64_t>(ids.size()), d);
  for (size_t r = 0; r < ids.size(); ++r) {
    const int id0 = ids[r];
    if (id0 < 0 || id0 >= vocab)
      throw ContractError("gather_rows: row index " + std::to_string(id0) + " out of range");
    std::copy_n(tv.data() + static_cast<int64_t>(id0) * d, d,
                out.data() + static_cast<int64_t>(r) * d);
  }
  const bool rg = node(table).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [table, id, ids = std::move(ids), d](Tape& t) {
      const Tensor& g = t.node(id).grad;
      Tensor& gt = t.grad_buf(table);
      for (size_t r = 0; r < ids.size(); ++r) {
        double* dst = gt.data() + static_cast<int64_t>(ids[r]) * d;
        const double* src = g.data() + static_cast<int64_t>(r) * d;
        for (int64_t j = 0; j < d; ++j) dst[j] += src[j];
      }
    };
  }
  return id;
}

Tape::NodeId Tape::concat_rows(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw ContractError("concat_rows: no parts");
  const int64_t d = node(parts[0]).value.cols();
  int64_t total = 0;
  bool rg = false;
  for (NodeId p : parts) {
    const Tensor& pv = node(p).value;
    if (pv.ndim() != 2 || pv.cols() != d) throw ShapeError("concat_rows: column mismatch");
    total += pv.rows();
    rg = rg || node(p).requires_grad;
  }
  Tensor out(total, d);
  int64_t r = 0;
  for (NodeId p : parts) {
    const Tensor& pv = node(p).value;
    std::copy_n(pv.data(), pv.size(), out.data() + r * d);
    r += pv.rows();
  }
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [parts, id, d](Tape& t) {
      const Tensor& g = t.node(id).grad;
      int64_t r2 = 0;
      for (NodeId p : parts) {
        const int64_t pr = t.node(p).value.rows();
        if (t.node(p).requires_grad) {
          Tensor& gp = t.grad_buf(p);
          const double* src = g.data() + r2 * d;
          for (int64_t i = 0; i < pr * d; ++i) gp.at(i) += src[i];
        }
        r2 += pr;
      }
    };
  }
  return id;
}

Tape::NodeId Tape::concat_cols(NodeId a, NodeId b) {
  const Tensor& av = node(a).value;
  const Tensor& bv = node(b).value;
  if (av.ndim() != 2 || bv.ndim() != 2 || av.rows() != bv.rows())
    throw ShapeError("concat_cols: row mismatch");
  const int64_t n = av.rows(), da = av.cols(), db = bv.cols();
  Tensor out(n, da + db);
  for (int64_t i = 0; i < n; ++i) {
    std::copy_n(av.data() + i * da, da, out.data() + i * (da + db));
    std::copy_n(bv.data() + i * db, db, out.data() + i * (da + db) + da);
  }
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, b, id, n, da, db](Tape& t) {
      const Tensor& g = t.node(id).grad;
      if (t.node(a).requires_grad) {
        Tensor& ga = t.grad_buf(a);
        for (int64_t i = 0; i < n; ++i)
          for (int64_t j = 0; j < da; ++j) ga.at(i, j) += g.at(i, j);
      }
      if (t.node(b).requires_grad) {
        Tensor& gb = t.grad_buf(b);
        for (int64_t i = 0; i < n; ++i)
          for (int64_t j = 0; j < db; ++j) gb.at(i, j) += g.at(i, da + j);
      }
    };
  }
  return id;
}

Tape::NodeId Tape::slice_rows(NodeId a, int64_t start, int64_t count) {
  const Tensor& av = node(a).value;
  if (av.ndim() != 2) throw ShapeError("slice_rows: tensor is not rank 2");
  if (start < 0 || count < 0 || start + count > av.rows())
    throw ShapeError("slice_rows: range out of bounds");
  const int64_t d = av.cols();
  Tensor out(count, d);
  std::copy_n(av.data() + start * d, count * d, out.data());
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id, start, count, d](Tape& t) {
      const Tensor& g = t.node(id).grad;
      Tensor& ga = t.grad_buf(a);
      double* dst = ga.data() + start * d;
      for (int64_t i = 0; i < count * d; ++i) dst[i] += g.at(i);
    };
  }
  return id;
}

Tape::NodeId Tape::transpose(NodeId a) {
  const Tensor& av = node(a).value;
  if (av.ndim() != 2) throw ShapeError("transpose: tensor is not rank 2");
  const int64_t n = av.rows(), d = av.cols();
  Tensor out(d, n);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < d; ++j) out.at(j, i) = av.at(i, j);
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id, n, d](Tape& t) {
      const Tensor& g = t.node(id).grad;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < d; ++j) ga.at(i, j) += g.at(j, i);
    };
  }
  return id;
}

Tape::NodeId Tape::sum_all(NodeId a) {
  const Tensor& av = node(a).value;
  double s = 0.0;
  for (int64_t i = 0; i < av.size(); ++i) s += av.at(i);
  Tensor out = Tensor::scalar(s);
  out.ensure_finite("sum");
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id](Tape& t) {
      const double g = t.node(id).grad.at(0);
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < ga.size(); ++i) ga.at(i) += g;
    };
  }
  return id;
}

Tape::NodeId Tape::mean_all(NodeId a) {
  const int64_t n = node(a).value.size();
  if (n == 0) throw ContractError("mean_all: empty tensor");
  return scale(sum_all(a), 1.0 / static_cast<double>(n));
}

Tape::NodeId Tape::layer_norm(NodeId x, NodeId gain, NodeId bias, double eps) {
  const Tensor& xv = node(x).value;
  const Tensor& gv = node(gain).value;
  const Tensor& bv = node(bias).value;
  if (xv.ndim() != 2) throw ShapeError("layer_norm: tensor is not rank 2");
  const int64_t n = xv.rows(), d = xv.cols();
  if (gv.rows() != 1 || gv.cols() != d || bv.rows() != 1 || bv.cols() != d)
    throw ShapeError("layer_norm: gain/bias must be [1,d]");
  Tensor out(n, d);
  Tensor xhat(n, d);
  std::vector<double> inv_std(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (int64_t j = 0; j < d; ++j) mu += xv.at(i, j);
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      const double c = xv.at(i, j) - mu;
      var += c * c;
    }
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(i)] = is;
    for (int64_t j = 0; j < d; ++j) {
      xhat.at(i, j) = (xv.at(i, j) - mu) * is;
      out.at(i, j) = xhat.at(i, j) * gv.at(0, j) + bv.at(0, j);
    }
  }
  out.ensure_finite("layer_norm");
  const bool rg = node(x).requires_grad || node(gain).requires_grad || node(bias).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [x, gain, bias, id, n, d, xhat = std::move(xhat),
                            inv_std = std::move(inv_std)](Tape& t) {
      const Tensor& g = t.node(id).grad;
      const Tensor& gv2 = t.node(gain).value;
      if (t.node(gain).requires_grad) {
        Tensor& gg = t.grad_buf(gain);
        for (int64_t i = 0; i < n; ++i)
          for (int64_t j = 0; j < d; ++j) gg.at(0, j) += g.at(i, j) * xhat.at(i, j);
      }
      if (t.node(bias).requires_grad) {
        Tensor& gb = t.grad_buf(bias);
        for (int64_t i = 0; i < n; ++i)
          for (int64_t j = 0; j < d; ++j) gb.at(0, j) += g.at(i, j);
      }
      if (t.node(x).requires_grad) {
        Tensor& gx = t.grad_buf(x);
        for (int64_t i = 0; i < n; ++i) {
          double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
          for (int64_t j = 0; j < d; ++j) {
            const double dxh = g.at(i, j) * gv2.at(0, j);
            mean_dxhat += dxh;
            mean_dxhat_xhat += dxh * xhat.at(i, j);
          }
          mean_dxhat /= static_cast<double>(d);
          mean_dxhat_xhat /= static_cast<double>(d);
          const double is = inv_std[static_cast<size_t>(i)];
          for (int64_t j = 0; j < d; ++j) {
            const double dxh = g.at(i, j) * gv2.at(0, j);
            gx.at(i, j) += is * (dxh - mean_dxhat - xhat.at(i, j) * mean_dxhat_xhat);
          }
        }
      }
    };
  }
  return id;
}

Tape::NodeId Tape::dropout(NodeId a, double rate, Rng& rng) {
  if (rate <= 0.0) return a;
  if (rate >= 1.0) throw ContractError("dropout: rate must be < 1");
  const Tensor& av = node(a).value;
  Tensor mask(av.shape());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (int64_t i = 0; i < mask.size(); ++i) mask.at(i) = rng.bernoulli(rate) ? 0.0 : keep_scale;
  Tensor out = av;
  for (int64_t i = 0; i < out.size(); ++i) out.at(i) *= mask.at(i);
  const bool rg = node(a).requires_grad;
  NodeId id = push(std::move(out), rg, {});
  if (rg) {
    node(id).backward_fn = [a, id, mask = std::move(mask)](Tape& t) {
      const Tensor& g = t.node(id).grad;
      Tensor& ga = t.grad_buf(a);
      for (int64_t i = 0; i < g.size(); ++i) ga.at(i) += g.at(i) * mask.at(i);
    };
  }
  return id;
}

Tape::NodeId scaled_dot_attention(Tape& t, Tape::NodeId q, Tape::NodeId k, Tape::NodeId v,
                                  Tape::NodeId bias) {
  const int64_t dk = t.value(k).cols();
  if (t.value(q).cols() != dk) throw ShapeError("attention: q/k width mismatch");
  Tape::NodeId scores = t.scale(t.matmul(q, t.transpose(k)), 1.0 / std::sqrt(static_cast<double>(dk)));
  if (bias >= 0) scores = t.add(scores, bias);
  return t.matmul(t.softmax_rows(scores), v);
}

double finite_diff_check(const std::function<double(const Tensor&)>& f,
                         const std::function<Tensor(const Tensor&)>& grad_f, const Tensor& x,
                         double eps) {
  if (eps <= 0.0) throw ContractError("finite_diff_check: eps must be positive");
  const Tensor analytic = grad_f(x);
  if (!analytic.same_shape(x)) throw ContractError("finite_diff_check: gradient shape mismatch");
  double worst = 0.0;
  Tensor probe = x;
  for (int64_t i = 0; i < x.size(); ++i) {
    const double orig = probe.at(i);
    probe.at(i) = orig + eps;
    const double fp = f(probe);
    probe.at(i) = orig - eps;
    const double fm = f(probe);
    probe.at(i) = orig;
    const double numeric = (fp - fm) / (2.0 * eps);
    const double denom = std::max({std::abs(analytic.at(i)), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic.at(i) - numeric) / denom);
  }
  return worst;
}

}  // namespace salieval::ad
