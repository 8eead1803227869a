#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "nightforge/nn/layers.hpp"

namespace nightforge::gan {

using nn::NamedParam;
using nn::Var;

/// Linear-complexity attention. Keys are normalized across positions
/// (softmax over n, per channel) and queries per position (softmax over the
/// key channels), so the n x n score matrix never materializes:
///
///   context = normalize_k(K)^T V          [dk x dv]
///   output  = normalize_q(Q) context      [n x dv]
///
/// Shapes: queries/keys [B, n, dk], values [B, n, dv]. The context is the
/// object cached for the paired decoder block.
struct AttentionResult {
  Var output;
  Var context;
};

AttentionResult efficient_attention(const Var& queries, const Var& keys,
                                    const Var& values);

/// Applies a precomputed context to fresh queries: normalize_q(Q) context.
Var apply_attention_context(const Var& queries, const Var& context);

/// Per-forward-pass store of encoder attention contexts, keyed by block
/// pairing. Entries are produced once and consumed exactly once.
class AttentionCache {
 public:
  void put(int pair_id, Var context);
  Var take(int pair_id);
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

 private:
  std::map<int, Var> entries_;
};

/// Encoder-side attention block on a [B,C,H,W] feature map. Produces the
/// shared context and adds a gated attention residual to its input.
class EncoderAttention {
 public:
  EncoderAttention() = default;
  EncoderAttention(int channels, int pair_id, std::mt19937_64& rng);

  struct Output {
    Var features;
    Var context;
  };
  Output forward(const Var& x) const;

  int pair_id() const { return pair_id_; }
  void collect(const std::string& prefix, std::vector<NamedParam>& out);

 private:
  nn::Conv2d to_query_, to_key_, to_value_, to_out_;
  Var gamma_;
  int pair_id_ = 0;
  int key_channels_ = 0;
};

/// Decoder-side attention block. Never computes its own context: it
/// consumes the paired encoder context (from the current pass by default,
/// or from a source-domain pass during reconstruction).
class DecoderAttention {
 public:
  DecoderAttention() = default;
  DecoderAttention(int channels, int pair_id, std::mt19937_64& rng);

  Var forward(const Var& x, const Var& context) const;

  int pair_id() const { return pair_id_; }
  void collect(const std::string& prefix, std::vector<NamedParam>& out);

 private:
  nn::Conv2d to_query_, to_out_;
  Var gamma_;
  int pair_id_ = 0;
  int key_channels_ = 0;
};

/// Key/query channel width used by attention blocks for a feature width C.
int attention_key_channels(int channels);

}  // namespace nightforge::gan
