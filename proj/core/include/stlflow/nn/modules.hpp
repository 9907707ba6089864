#pragma once

#include "stlflow/nn/tensor.hpp"
#include "stlflow/rng.hpp"

namespace stlflow::nn {

// Dense layer y = x @ W + b with Kaiming-uniform fan-in init.
struct LinearLayer {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out

  LinearLayer() = default;
  LinearLayer(int in, int out, Rng &rng);

  Tensor forward(const Tensor &x) const { return add_rowvec(matmul(x, weight), bias); }
  void collect_params(std::vector<Tensor> &out) const {
    out.push_back(weight);
    out.push_back(bias);
  }
};

// Plain MLP with ReLU between layers; the last layer is linear.
struct Mlp {
  std::vector<LinearLayer> layers;

  Mlp() = default;
  Mlp(int in, const std::vector<int> &hidden, int out, Rng &rng);

  Tensor forward(Tensor x) const;
  void collect_params(std::vector<Tensor> &out) const {
    for (const auto &l : layers) l.collect_params(out);
  }
};

// Adam over a set of parameter tensors.
class AdamOpt {
 public:
  AdamOpt(std::vector<Tensor> params, double lr, double b1 = 0.9, double b2 = 0.999,
          double eps = 1e-8);

  void set_lr(double lr) { lr_ = lr; }
  void zero_grad();
  void step();

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> m_, v_;
  double lr_, b1_, b2_, eps_;
  long t_ = 0;
};

// 16-d sinusoidal embedding of a scalar in [0, 1] (or the raw scalar,
// when dim == 1).
std::vector<double> time_embedding(double t, int dim);

}  // namespace stlflow::nn
