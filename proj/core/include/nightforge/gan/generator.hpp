#pragma once

#include <map>
#include <random>
#include <vector>

#include "nightforge/gan/attention.hpp"
#include "nightforge/gan/config.hpp"
#include "nightforge/nn/layers.hpp"

namespace nightforge::gan {

/// Residual translation generator: 7x7 stem, two stride-2 downsamples,
/// residual bottleneck, two upsamples, 7x7 tanh output. Attention blocks
/// sit at the configured encoder depths with mirrored decoder partners.
class Generator {
 public:
  Generator() = default;
  Generator(const GeneratorConfig& cfg, std::mt19937_64& rng);

  struct ForwardResult {
    Var image;  // tanh output in [-1, 1]
    /// Encoder-produced contexts, keyed by pairing depth, in encoder order.
    std::vector<std::pair<int, Var>> contexts;
    /// Contexts the decoder consumed (same-pass by default, caller-supplied
    /// during a reconstruction pass).
    std::vector<std::pair<int, Var>> consumed;
  };

  /// Runs the generator. When `source_context` is null, each decoder
  /// attention block consumes the context its encoder partner produced in
  /// this pass. When non-null (reconstruction pass), decoder blocks consume
  /// the supplied source-domain contexts instead; the cache must hold
  /// exactly one entry per pairing and is empty afterwards.
  ForwardResult forward(const Var& x, AttentionCache* source_context = nullptr) const;

  /// Builds a cache holding the contexts a previous pass produced.
  static AttentionCache make_cache(const std::vector<std::pair<int, Var>>& contexts);

  void collect(const std::string& prefix, std::vector<NamedParam>& out);
  const GeneratorConfig& config() const { return cfg_; }

 private:
  struct ResidualBlock {
    nn::Conv2d conv1, conv2;
    nn::InstanceNorm2d norm;
    Var forward(const Var& x) const;
    void collect(const std::string& prefix, std::vector<NamedParam>& out);
  };

  GeneratorConfig cfg_;
  nn::Conv2d stem_, down1_, down2_, out_;
  nn::ConvTranspose2d up1_, up2_;
  std::vector<ResidualBlock> residual_;
  nn::InstanceNorm2d norm_;
  std::map<int, EncoderAttention> encoder_attention_;
  std::map<int, DecoderAttention> decoder_attention_;
};

}  // namespace nightforge::gan
