#include "nightforge/gan/attention.hpp"

#include <algorithm>

#include "nightforge/core/errors.hpp"

namespace nightforge::gan {

using namespace nn;

AttentionResult efficient_attention(const Var& queries, const Var& keys,
                                    const Var& values) {
  if (queries.value().ndim() != 3 || keys.value().ndim() != 3 ||
      values.value().ndim() != 3) {
    throw ShapeError("efficient_attention: expected [B,n,c] tensors");
  }
  const auto& qs = queries.shape();
  const auto& ks = keys.shape();
  const auto& vs = values.shape();
  if (qs[0] != ks[0] || qs[0] != vs[0]) {
    throw ShapeError("efficient_attention: batch mismatch");
  }
  if (ks[1] != vs[1]) {
    throw ShapeError("efficient_attention: key/value position mismatch");
  }
  if (qs[2] != ks[2]) {
    throw ShapeError("efficient_attention: query/key channel mismatch");
  }
  // Keys: softmax over positions per channel, applied on [B,dk,n] rows.
  Var keys_norm_t = softmax_lastdim(transpose_last2(keys));
  Var context = bmm(keys_norm_t, values);  // [B, dk, dv]
  Var output = apply_attention_context(queries, context);
  return {output, context};
}

Var apply_attention_context(const Var& queries, const Var& context) {
  // Queries: softmax over channels per position.
  return bmm(softmax_lastdim(queries), context);
}

void AttentionCache::put(int pair_id, Var context) {
  if (entries_.count(pair_id)) {
    throw CacheError("attention context already cached for pairing " +
                     std::to_string(pair_id));
  }
  entries_.emplace(pair_id, std::move(context));
}

Var AttentionCache::take(int pair_id) {
  auto it = entries_.find(pair_id);
  if (it == entries_.end()) {
    throw CacheError("no attention context cached for pairing " +
                     std::to_string(pair_id));
  }
  Var context = it->second;
  entries_.erase(it);
  return context;
}

int attention_key_channels(int channels) {
  return std::max(channels / 8, 2);
}

namespace {

// [B,C,H,W] -> [B, H*W, C]
Var to_positions(const Var& features) {
  const auto& s = features.shape();
  Var flat = reshape(features, {s[0], s[1], s[2] * s[3]});
  return transpose_last2(flat);
}

// [B, H*W, C] -> [B,C,H,W]
Var to_feature_map(const Var& positions, const std::vector<int>& like) {
  Var t = transpose_last2(positions);
  return reshape(t, like);
}

}  // namespace

EncoderAttention::EncoderAttention(int channels, int pair_id,
                                   std::mt19937_64& rng)
    : pair_id_(pair_id), key_channels_(attention_key_channels(channels)) {
  to_query_ = Conv2d(channels, key_channels_, 1, 1, 0, rng);
  to_key_ = Conv2d(channels, key_channels_, 1, 1, 0, rng);
  to_value_ = Conv2d(channels, channels, 1, 1, 0, rng);
  to_out_ = Conv2d(channels, channels, 1, 1, 0, rng);
  // Zero-initialized gate: the block starts as an identity and learns how
  // much attention to blend in.
  gamma_ = Var(Tensor::zeros({1}), /*requires_grad=*/true);
}

EncoderAttention::Output EncoderAttention::forward(const Var& x) const {
  const std::vector<int> shape = x.shape();
  Var q = to_positions(to_query_.forward(x));
  Var k = to_positions(to_key_.forward(x));
  Var v = to_positions(to_value_.forward(x));
  AttentionResult attn = efficient_attention(q, k, v);
  Var projected = to_out_.forward(to_feature_map(attn.output, shape));
  Var features = add(x, scale_by(projected, gamma_));
  return {features, attn.context};
}

void EncoderAttention::collect(const std::string& prefix,
                               std::vector<NamedParam>& out) {
  to_query_.collect(prefix + ".q", out);
  to_key_.collect(prefix + ".k", out);
  to_value_.collect(prefix + ".v", out);
  to_out_.collect(prefix + ".out", out);
  out.push_back({prefix + ".gamma", &gamma_});
}

DecoderAttention::DecoderAttention(int channels, int pair_id,
                                   std::mt19937_64& rng)
    : pair_id_(pair_id), key_channels_(attention_key_channels(channels)) {
  to_query_ = Conv2d(channels, key_channels_, 1, 1, 0, rng);
  to_out_ = Conv2d(channels, channels, 1, 1, 0, rng);
  gamma_ = Var(Tensor::zeros({1}), /*requires_grad=*/true);
}

Var DecoderAttention::forward(const Var& x, const Var& context) const {
  const auto& ctx_shape = context.shape();
  if (ctx_shape.size() != 3 || ctx_shape[1] != key_channels_ ||
      ctx_shape[2] != x.shape()[1]) {
    throw ShapeError("decoder attention: context shape incompatible");
  }
  const std::vector<int> shape = x.shape();
  Var q = to_positions(to_query_.forward(x));
  Var attended = apply_attention_context(q, context);
  Var projected = to_out_.forward(to_feature_map(attended, shape));
  return add(x, scale_by(projected, gamma_));
}

void DecoderAttention::collect(const std::string& prefix,
                               std::vector<NamedParam>& out) {
  to_query_.collect(prefix + ".q", out);
  to_out_.collect(prefix + ".out", out);
  out.push_back({prefix + ".gamma", &gamma_});
}

}  // namespace nightforge::gan
