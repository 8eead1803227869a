#pragma once

#include <random>
#include <vector>

#include "nightforge/nn/layers.hpp"

namespace nightforge::gan {

using nn::NamedParam;
using nn::Var;

/// Patch discriminator: stacked stride-2 4x4 convs followed by two
/// stride-1 layers, emitting a grid of per-patch realism scores rather
/// than one scalar.
class PatchDiscriminator {
 public:
  PatchDiscriminator() = default;
  PatchDiscriminator(int in_channels, int base_channels, int n_layers,
                     std::mt19937_64& rng);

  /// Returns the [B,1,h,w] score patch.
  Var forward(const Var& x) const;

  void collect(const std::string& prefix, std::vector<NamedParam>& out);

 private:
  std::vector<nn::Conv2d> convs_;
  nn::InstanceNorm2d norm_;
  int n_layers_ = 0;
};

}  // namespace nightforge::gan
