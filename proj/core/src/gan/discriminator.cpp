#include "nightforge/gan/discriminator.hpp"

#include <algorithm>

#include "nightforge/core/errors.hpp"

namespace nightforge::gan {

using namespace nn;

PatchDiscriminator::PatchDiscriminator(int in_channels, int base_channels,
                                       int n_layers, std::mt19937_64& rng)
    : n_layers_(n_layers) {
  if (n_layers < 1) throw ConfigError("discriminator needs at least one layer");
  int ch = base_channels;
  convs_.emplace_back(in_channels, ch, 4, 2, 1, rng);
  for (int i = 1; i < n_layers; ++i) {
    const int next = std::min(ch * 2, base_channels * 8);
    convs_.emplace_back(ch, next, 4, 2, 1, rng);
    ch = next;
  }
  const int penultimate = std::min(ch * 2, base_channels * 8);
  convs_.emplace_back(ch, penultimate, 4, 1, 1, rng);
  convs_.emplace_back(penultimate, 1, 4, 1, 1, rng);
}

Var PatchDiscriminator::forward(const Var& x) const {
  Var h = leaky_relu(convs_[0].forward(x), 0.2);
  for (size_t i = 1; i + 1 < convs_.size(); ++i) {
    h = leaky_relu(norm_.forward(convs_[i].forward(h)), 0.2);
  }
  return convs_.back().forward(h);
}

void PatchDiscriminator::collect(const std::string& prefix,
                                 std::vector<NamedParam>& out) {
  for (size_t i = 0; i < convs_.size(); ++i) {
    convs_[i].collect(prefix + ".conv" + std::to_string(i), out);
  }
}

}  // namespace nightforge::gan
