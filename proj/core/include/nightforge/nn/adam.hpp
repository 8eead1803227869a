#pragma once

#include <vector>

#include "nightforge/nn/layers.hpp"

namespace nightforge::nn {

/// Adam with bias correction. Parameters are updated in place from their
/// accumulated gradients; call zero_grad() between steps.
class Adam {
 public:
  Adam(std::vector<NamedParam> params, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);

  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

  void step();
  void zero_grad();

 private:
  struct Slot {
    Tensor m, v;
  };
  std::vector<NamedParam> params_;
  std::vector<Slot> slots_;
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
};

}  // namespace nightforge::nn
