#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "stlflow/mat.hpp"

namespace stlflow::nn {

// Minimal dense reverse-mode autodiff over 2-D double tensors. Values are
// built into a tape via the op functions below; backward() runs the tape in
// reverse topological order.
struct TensorImpl {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorImpl>> parents;
  std::function<void(TensorImpl &)> backward_fn;

  size_t size() const { return data.size(); }
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

  static Tensor zeros(int rows, int cols, bool requires_grad = false);
  static Tensor from_mat(const Mat &m, bool requires_grad = false);
  static Tensor from_values(int rows, int cols, std::vector<double> values,
                            bool requires_grad = false);

  bool valid() const { return impl_ != nullptr; }
  int rows() const { return impl_->rows; }
  int cols() const { return impl_->cols; }
  std::vector<double> &data() { return impl_->data; }
  const std::vector<double> &data() const { return impl_->data; }
  std::vector<double> &grad() { return impl_->grad; }
  const std::vector<double> &grad() const { return impl_->grad; }
  bool requires_grad() const { return impl_->requires_grad; }

  double at(int r, int c) const { return impl_->data[size_t(r) * impl_->cols + c]; }

  std::shared_ptr<TensorImpl> impl() const { return impl_; }

  // Seeds d(self)/d(self) = 1 and propagates through the tape. Only valid on
  // scalars (1x1).
  void backward();
  void zero_grad();

 private:
  std::shared_ptr<TensorImpl> impl_;
};

// out = a @ b
Tensor matmul(const Tensor &a, const Tensor &b);
// out[r] = x[r] + bias (bias is 1 x cols)
Tensor add_rowvec(const Tensor &x, const Tensor &bias);
Tensor add(const Tensor &a, const Tensor &b);
Tensor relu(const Tensor &x);
Tensor scale(const Tensor &x, double s);
// out = mean over rows (1 x cols)
Tensor mean_rows(const Tensor &x);
// horizontal concat, all inputs share row count
Tensor concat_cols(const std::vector<Tensor> &parts);
// vertical concat, all inputs share column count
Tensor concat_rows(const std::vector<Tensor> &parts);
// mean of squared entries of (pred - target); scalar output
Tensor mse(const Tensor &pred, const Tensor &target);

// out[v] = sum over (u, w) in nb[v] of w * x[u]. Contributions are summed in
// sorted value order per output entry, which makes the result independent of
// neighbor storage order, bit for bit.
Tensor neighbor_sum(const Tensor &x, const std::vector<std::vector<std::pair<int, double>>> &nb);

}  // namespace stlflow::nn
