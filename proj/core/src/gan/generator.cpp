#include "nightforge/gan/generator.hpp"

#include "nightforge/core/errors.hpp"

namespace nightforge::gan {

using namespace nn;

Var Generator::ResidualBlock::forward(const Var& x) const {
  Var h = relu(norm.forward(conv1.forward(reflection_pad2d(x, 1))));
  h = norm.forward(conv2.forward(reflection_pad2d(h, 1)));
  return add(x, h);
}

void Generator::ResidualBlock::collect(const std::string& prefix,
                                       std::vector<NamedParam>& out) {
  conv1.collect(prefix + ".conv1", out);
  conv2.collect(prefix + ".conv2", out);
}

Generator::Generator(const GeneratorConfig& cfg, std::mt19937_64& rng)
    : cfg_(cfg) {
  validate(cfg);
  const int bc = cfg.base_channels;
  stem_ = Conv2d(3, bc, 7, 1, 0, rng);
  down1_ = Conv2d(bc, bc * 2, 3, 2, 1, rng);
  down2_ = Conv2d(bc * 2, bc * 4, 3, 2, 1, rng);
  residual_.resize(static_cast<size_t>(cfg.n_residual_blocks));
  for (auto& block : residual_) {
    block.conv1 = Conv2d(bc * 4, bc * 4, 3, 1, 0, rng);
    block.conv2 = Conv2d(bc * 4, bc * 4, 3, 1, 0, rng);
  }
  up1_ = ConvTranspose2d(bc * 4, bc * 2, 3, 2, 1, 1, rng);
  up2_ = ConvTranspose2d(bc * 2, bc, 3, 2, 1, 1, rng);
  out_ = Conv2d(bc, 3, 7, 1, 0, rng);
  const int depth_channels[3] = {bc, bc * 2, bc * 4};
  for (int depth : cfg.attention_positions) {
    encoder_attention_.emplace(depth,
                               EncoderAttention(depth_channels[depth], depth, rng));
  }
  // Decoder partners are created after every encoder block so parameter
  // order (and therefore seeded init) only depends on the config.
  for (int depth : cfg.attention_positions) {
    decoder_attention_.emplace(depth,
                               DecoderAttention(depth_channels[depth], depth, rng));
  }
}

AttentionCache Generator::make_cache(
    const std::vector<std::pair<int, Var>>& contexts) {
  AttentionCache cache;
  for (const auto& [pair_id, context] : contexts) cache.put(pair_id, context);
  return cache;
}

Generator::ForwardResult Generator::forward(const Var& x,
                                            AttentionCache* source_context) const {
  ForwardResult result;
  AttentionCache same_pass;
  AttentionCache* consume_from = source_context ? source_context : &same_pass;

  auto encode_attention = [&](int depth, Var features) {
    auto it = encoder_attention_.find(depth);
    if (it == encoder_attention_.end()) return features;
    EncoderAttention::Output out = it->second.forward(features);
    result.contexts.emplace_back(depth, out.context);
    if (!source_context) same_pass.put(depth, out.context);
    return out.features;
  };
  auto decode_attention = [&](int depth, Var features) {
    auto it = decoder_attention_.find(depth);
    if (it == decoder_attention_.end()) return features;
    Var context = consume_from->take(depth);
    result.consumed.emplace_back(depth, context);
    return it->second.forward(features, context);
  };

  Var h = relu(norm_.forward(stem_.forward(reflection_pad2d(x, 3))));
  h = encode_attention(0, h);
  h = relu(norm_.forward(down1_.forward(h)));
  h = encode_attention(1, h);
  h = relu(norm_.forward(down2_.forward(h)));
  h = encode_attention(2, h);

  for (const auto& block : residual_) h = block.forward(h);

  h = decode_attention(2, h);
  h = relu(norm_.forward(up1_.forward(h)));
  h = decode_attention(1, h);
  h = relu(norm_.forward(up2_.forward(h)));
  h = decode_attention(0, h);
  result.image = tanh_elem(out_.forward(reflection_pad2d(h, 3)));

  if (!consume_from->empty()) {
    throw CacheError("attention contexts left unconsumed after forward pass");
  }
  return result;
}

void Generator::collect(const std::string& prefix,
                        std::vector<NamedParam>& out) {
  stem_.collect(prefix + ".stem", out);
  down1_.collect(prefix + ".down1", out);
  down2_.collect(prefix + ".down2", out);
  for (size_t i = 0; i < residual_.size(); ++i) {
    residual_[i].collect(prefix + ".res" + std::to_string(i), out);
  }
  up1_.collect(prefix + ".up1", out);
  up2_.collect(prefix + ".up2", out);
  out_.collect(prefix + ".head", out);
  for (auto& [depth, block] : encoder_attention_) {
    block.collect(prefix + ".enc_attn" + std::to_string(depth), out);
  }
  for (auto& [depth, block] : decoder_attention_) {
    block.collect(prefix + ".dec_attn" + std::to_string(depth), out);
  }
}

}  // namespace nightforge::gan
