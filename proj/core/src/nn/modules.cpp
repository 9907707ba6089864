#include "stlflow/nn/modules.hpp"

#include <cmath>

namespace stlflow::nn {

LinearLayer::LinearLayer(int in, int out, Rng &rng) {
  weight = Tensor::zeros(in, out, true);
  bias = Tensor::zeros(1, out, true);
  double bound = std::sqrt(6.0 / in) / std::sqrt(2.0);  // kaiming uniform, fan-in
  for (auto &w : weight.data()) w = uniform(rng, -bound, bound);
  double bbound = 1.0 / std::sqrt(static_cast<double>(in));
  for (auto &b : bias.data()) b = uniform(rng, -bbound, bbound);
}

Mlp::Mlp(int in, const std::vector<int> &hidden, int out, Rng &rng) {
  int prev = in;
  for (int h : hidden) {
    layers.emplace_back(prev, h, rng);
    prev = h;
  }
  layers.emplace_back(prev, out, rng);
}

Tensor Mlp::forward(Tensor x) const {
  for (size_t i = 0; i < layers.size(); ++i) {
    x = layers[i].forward(x);
    if (i + 1 < layers.size()) x = relu(x);
  }
  return x;
}

AdamOpt::AdamOpt(std::vector<Tensor> params, double lr, double b1, double b2,
                 double eps)
    : params_(std::move(params)), lr_(lr), b1_(b1), b2_(b2), eps_(eps) {
  for (const auto &p : params_) {
    m_.emplace_back(p.data().size(), 0.0);
    v_.emplace_back(p.data().size(), 0.0);
  }
}

void AdamOpt::zero_grad() {
  for (auto &p : params_) p.zero_grad();
}

void AdamOpt::step() {
  ++t_;
  double bc1 = 1.0 - std::pow(b1_, t_);
  double bc2 = 1.0 - std::pow(b2_, t_);
  for (size_t k = 0; k < params_.size(); ++k) {
    auto &data = params_[k].data();
    const auto &grad = params_[k].grad();
    if (grad.size() != data.size()) continue;  // never touched by backward
    for (size_t i = 0; i < data.size(); ++i) {
      m_[k][i] = b1_ * m_[k][i] + (1 - b1_) * grad[i];
      v_[k][i] = b2_ * v_[k][i] + (1 - b2_) * grad[i] * grad[i];
      data[i] -= lr_ * (m_[k][i] / bc1) / (std::sqrt(v_[k][i] / bc2) + eps_);
    }
  }
}

std::vector<double> time_embedding(double t, int dim) {
  if (dim <= 1) return {t};
  std::vector<double> emb(dim);
  int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    double freq = std::pow(10000.0, -static_cast<double>(i) / half);
    emb[2 * i] = std::sin(t * freq * 2.0 * M_PI);
    emb[2 * i + 1] = std::cos(t * freq * 2.0 * M_PI);
  }
  return emb;
}

}  // namespace stlflow::nn
