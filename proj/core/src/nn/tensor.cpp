#include "stlflow/nn/tensor.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace stlflow::nn {

namespace {

std::shared_ptr<TensorImpl> make_impl(int rows, int cols, bool requires_grad) {
  auto impl = std::make_shared<TensorImpl>();
  impl->rows = rows;
  impl->cols = cols;
  impl->data.assign(size_t(rows) * cols, 0.0);
  impl->requires_grad = requires_grad;
  if (requires_grad) impl->grad.assign(impl->data.size(), 0.0);
  return impl;
}

// result tensor whose grad flows back into parents
Tensor make_result(int rows, int cols, std::vector<std::shared_ptr<TensorImpl>> parents,
                   std::function<void(TensorImpl &)> backward_fn) {
  bool any = false;
  for (const auto &p : parents) any = any || p->requires_grad;
  auto impl = make_impl(rows, cols, any);
  if (any) {
    impl->parents = std::move(parents);
    impl->backward_fn = std::move(backward_fn);
  }
  return Tensor(impl);
}

void ensure_grad(TensorImpl &t) {
  if (t.grad.size() != t.data.size()) t.grad.assign(t.data.size(), 0.0);
}

}  // namespace

Tensor Tensor::zeros(int rows, int cols, bool requires_grad) {
  return Tensor(make_impl(rows, cols, requires_grad));
}

Tensor Tensor::from_mat(const Mat &m, bool requires_grad) {
  auto impl = make_impl(m.rows, m.cols, requires_grad);
  impl->data = m.v;
  return Tensor(impl);
}

Tensor Tensor::from_values(int rows, int cols, std::vector<double> values,
                           bool requires_grad) {
  if (values.size() != size_t(rows) * cols)
    throw std::invalid_argument("from_values: size mismatch");
  auto impl = make_impl(rows, cols, requires_grad);
  impl->data = std::move(values);
  return Tensor(impl);
}

void Tensor::zero_grad() {
  if (impl_->requires_grad) impl_->grad.assign(impl_->data.size(), 0.0);
}

void Tensor::backward() {
  if (rows() != 1 || cols() != 1)
    throw std::invalid_argument("backward() expects a scalar tensor");
  // topological order over the tape
  std::vector<TensorImpl *> order;
  std::unordered_set<TensorImpl *> visited;
  std::function<void(const std::shared_ptr<TensorImpl> &)> dfs =
      [&](const std::shared_ptr<TensorImpl> &node) {
        if (!node->requires_grad || visited.count(node.get())) return;
        visited.insert(node.get());
        for (const auto &p : node->parents) dfs(p);
        order.push_back(node.get());
      };
  dfs(impl_);
  for (TensorImpl *node : order) ensure_grad(*node);
  ensure_grad(*impl_);
  impl_->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backward_fn) (*it)->backward_fn(**it);
}

Tensor matmul(const Tensor &a, const Tensor &b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  const int R = a.rows(), K = a.cols(), C = b.cols();
  auto ai = a.impl(), bi = b.impl();
  Tensor out = make_result(R, C, {ai, bi}, [ai, bi, R, K, C](TensorImpl &self) {
    const double *g = self.grad.data();
    if (ai->requires_grad) {
      ensure_grad(*ai);
      // dA = G @ B^T
      for (int r = 0; r < R; ++r)
        for (int k = 0; k < K; ++k) {
          double acc = 0;
          const double *gr = g + size_t(r) * C;
          const double *bk = bi->data.data() + size_t(k) * C;
          for (int c = 0; c < C; ++c) acc += gr[c] * bk[c];
          ai->grad[size_t(r) * K + k] += acc;
        }
    }
    if (bi->requires_grad) {
      ensure_grad(*bi);
      // dB = A^T @ G
      for (int r = 0; r < R; ++r) {
        const double *ar = ai->data.data() + size_t(r) * K;
        const double *gr = g + size_t(r) * C;
        for (int k = 0; k < K; ++k) {
          double av = ar[k];
          if (av == 0.0) continue;
          double *bg = bi->grad.data() + size_t(k) * C;
          for (int c = 0; c < C; ++c) bg[c] += av * gr[c];
        }
      }
    }
  });
  // forward: row-major ikj loop
  double *o = out.data().data();
  for (int r = 0; r < R; ++r) {
    const double *ar = a.data().data() + size_t(r) * K;
    double *orow = o + size_t(r) * C;
    for (int k = 0; k < K; ++k) {
      double av = ar[k];
      if (av == 0.0) continue;
      const double *bk = b.data().data() + size_t(k) * C;
      for (int c = 0; c < C; ++c) orow[c] += av * bk[c];
    }
  }
  return out;
}

Tensor add_rowvec(const Tensor &x, const Tensor &bias) {
  if (bias.rows() != 1 || bias.cols() != x.cols())
    throw std::invalid_argument("add_rowvec: shape mismatch");
  auto xi = x.impl(), bi = bias.impl();
  const int R = x.rows(), C = x.cols();
  Tensor out = make_result(R, C, {xi, bi}, [xi, bi, R, C](TensorImpl &self) {
    if (xi->requires_grad) {
      ensure_grad(*xi);
      for (size_t i = 0; i < self.grad.size(); ++i) xi->grad[i] += self.grad[i];
    }
    if (bi->requires_grad) {
      ensure_grad(*bi);
      for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) bi->grad[c] += self.grad[size_t(r) * C + c];
    }
  });
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c)
      out.data()[size_t(r) * C + c] = x.data()[size_t(r) * C + c] + bias.data()[c];
  return out;
}

Tensor add(const Tensor &a, const Tensor &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add: shape mismatch");
  auto ai = a.impl(), bi = b.impl();
  Tensor out = make_result(a.rows(), a.cols(), {ai, bi}, [ai, bi](TensorImpl &self) {
    for (auto *p : {ai.get(), bi.get()})
      if (p->requires_grad) {
        ensure_grad(*p);
        for (size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
      }
  });
  for (size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Tensor relu(const Tensor &x) {
  auto xi = x.impl();
  Tensor out = make_result(x.rows(), x.cols(), {xi}, [xi](TensorImpl &self) {
    if (!xi->requires_grad) return;
    ensure_grad(*xi);
    for (size_t i = 0; i < self.grad.size(); ++i)
      if (self.data[i] > 0.0) xi->grad[i] += self.grad[i];
  });
  for (size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = x.data()[i] > 0.0 ? x.data()[i] : 0.0;
  return out;
}

Tensor scale(const Tensor &x, double s) {
  auto xi = x.impl();
  Tensor out = make_result(x.rows(), x.cols(), {xi}, [xi, s](TensorImpl &self) {
    if (!xi->requires_grad) return;
    ensure_grad(*xi);
    for (size_t i = 0; i < self.grad.size(); ++i) xi->grad[i] += s * self.grad[i];
  });
  for (size_t i = 0; i < out.data().size(); ++i) out.data()[i] = s * x.data()[i];
  return out;
}

Tensor mean_rows(const Tensor &x) {
  auto xi = x.impl();
  const int R = x.rows(), C = x.cols();
  Tensor out = make_result(1, C, {xi}, [xi, R, C](TensorImpl &self) {
    if (!xi->requires_grad) return;
    ensure_grad(*xi);
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < C; ++c) xi->grad[size_t(r) * C + c] += self.grad[c] / R;
  });
  // summation in sorted value order keeps the readout invariant to node
  // (row) permutations, bit for bit
  std::vector<double> col(static_cast<size_t>(R));
  for (int c = 0; c < C; ++c) {
    for (int r = 0; r < R; ++r) col[size_t(r)] = x.data()[size_t(r) * C + c];
    std::sort(col.begin(), col.end());
    double acc = 0;
    for (double v : col) acc += v;
    out.data()[c] = acc / R;
  }
  return out;
}

Tensor concat_cols(const std::vector<Tensor> &parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: empty");
  const int R = parts[0].rows();
  int C = 0;
  std::vector<std::shared_ptr<TensorImpl>> parents;
  for (const auto &p : parts) {
    if (p.rows() != R) throw std::invalid_argument("concat_cols: row mismatch");
    C += p.cols();
    parents.push_back(p.impl());
  }
  auto ps = parents;
  Tensor out = make_result(R, C, std::move(parents), [ps, R, C](TensorImpl &self) {
    int offset = 0;
    for (const auto &p : ps) {
      if (p->requires_grad) {
        ensure_grad(*p);
        for (int r = 0; r < R; ++r)
          for (int c = 0; c < p->cols; ++c)
            p->grad[size_t(r) * p->cols + c] += self.grad[size_t(r) * C + offset + c];
      }
      offset += p->cols;
    }
  });
  int offset = 0;
  for (const auto &p : parts) {
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < p.cols(); ++c)
        out.data()[size_t(r) * C + offset + c] = p.data()[size_t(r) * p.cols() + c];
    offset += p.cols();
  }
  return out;
}

Tensor concat_rows(const std::vector<Tensor> &parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: empty");
  const int C = parts[0].cols();
  int R = 0;
  std::vector<std::shared_ptr<TensorImpl>> parents;
  for (const auto &p : parts) {
    if (p.cols() != C) throw std::invalid_argument("concat_rows: col mismatch");
    R += p.rows();
    parents.push_back(p.impl());
  }
  auto ps = parents;
  Tensor out = make_result(R, C, std::move(parents), [ps, C](TensorImpl &self) {
    size_t offset = 0;
    for (const auto &p : ps) {
      if (p->requires_grad) {
        ensure_grad(*p);
        for (size_t i = 0; i < p->data.size(); ++i) p->grad[i] += self.grad[offset + i];
      }
      offset += p->data.size();
    }
  });
  size_t offset = 0;
  for (const auto &p : parts) {
    std::copy(p.data().begin(), p.data().end(), out.data().begin() + offset);
    offset += p.data().size();
  }
  return out;
}

Tensor mse(const Tensor &pred, const Tensor &target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw std::invalid_argument("mse: shape mismatch");
  auto pi = pred.impl(), ti = target.impl();
  const double N = static_cast<double>(pred.data().size());
  Tensor out = make_result(1, 1, {pi, ti}, [pi, ti, N](TensorImpl &self) {
    double g = self.grad[0] * 2.0 / N;
    if (pi->requires_grad) {
      ensure_grad(*pi);
      for (size_t i = 0; i < pi->data.size(); ++i)
        pi->grad[i] += g * (pi->data[i] - ti->data[i]);
    }
    if (ti->requires_grad) {
      ensure_grad(*ti);
      for (size_t i = 0; i < ti->data.size(); ++i)
        ti->grad[i] -= g * (pi->data[i] - ti->data[i]);
    }
  });
  double acc = 0;
  for (size_t i = 0; i < pred.data().size(); ++i) {
    double d = pred.data()[i] - target.data()[i];
    acc += d * d;
  }
  out.data()[0] = acc / N;
  return out;
}

Tensor neighbor_sum(const Tensor &x,
                    const std::vector<std::vector<std::pair<int, double>>> &nb) {
  const int V = static_cast<int>(nb.size());
  const int C = x.cols();
  auto xi = x.impl();
  auto nb_copy = nb;
  Tensor out = make_result(V, C, {xi}, [xi, nb_copy, C](TensorImpl &self) {
    if (!xi->requires_grad) return;
    ensure_grad(*xi);
    for (size_t v = 0; v < nb_copy.size(); ++v)
      for (auto [u, w] : nb_copy[v])
        for (int c = 0; c < C; ++c)
          xi->grad[size_t(u) * C + c] += w * self.grad[v * C + c];
  });
  std::vector<double> terms;
  for (int v = 0; v < V; ++v) {
    for (int c = 0; c < C; ++c) {
      terms.clear();
      for (auto [u, w] : nb[v]) terms.push_back(w * x.data()[size_t(u) * C + c]);
      std::sort(terms.begin(), terms.end());
      double acc = 0;
      for (double t : terms) acc += t;
      out.data()[size_t(v) * C + c] = acc;
    }
  }
  return out;
}

}  // namespace stlflow::nn
