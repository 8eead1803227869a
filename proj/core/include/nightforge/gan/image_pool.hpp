#pragma once

#include <random>
#include <vector>

#include "nightforge/nn/tensor.hpp"

namespace nightforge::gan {

/// History pool of generated images fed to discriminators. Until the pool
/// is full every fake passes through and is stored; afterwards each query
/// returns, with probability 1/2, a stored image swapped out for the new
/// one. Capacity 0 disables the pool.
class ImagePool {
 public:
  ImagePool(int capacity, std::uint64_t seed);

  /// `fake` is a [B,C,H,W] batch; each sample is pooled independently.
  nn::Tensor query(const nn::Tensor& fake);

  size_t size() const { return images_.size(); }

 private:
  int capacity_;
  std::vector<nn::Tensor> images_;
  std::mt19937_64 rng_;
};

}  // namespace nightforge::gan
