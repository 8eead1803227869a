#include "nightforge/nn/adam.hpp"

#include <cmath>

namespace nightforge::nn {

Adam::Adam(std::vector<NamedParam> params, double lr, double beta1,
           double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
      eps_(eps) {
  slots_.resize(params_.size());
  for (size_t i = 0; i < params_.size(); ++i) {
    const auto& shape = params_[i].var->value().shape();
    slots_[i].m = Tensor::zeros(shape);
    slots_[i].v = Tensor::zeros(shape);
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Var* p = params_[i].var;
    if (!p->grad().defined()) continue;
    Tensor& value = p->value();
    const Tensor& g = p->grad();
    Tensor& m = slots_[i].m;
    Tensor& v = slots_[i].v;
    for (std::int64_t j = 0; j < value.numel(); ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      value[j] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.var->zero_grad();
}

}  // namespace nightforge::nn
