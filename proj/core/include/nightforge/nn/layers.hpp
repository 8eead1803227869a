#pragma once

#include <random>
#include <string>
#include <vector>

#include "nightforge/nn/autograd.hpp"

namespace nightforge::nn {

/// Named parameter reference, used for optimizers and checkpoints.
struct NamedParam {
  std::string name;
  Var* var;
};

class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int in_channels, int out_channels, int kernel, int stride, int padding,
         std::mt19937_64& rng, bool bias = true);

  Var forward(const Var& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out);

 private:
  Var weight_, bias_;
  int stride_ = 1;
  int padding_ = 0;
};

class ConvTranspose2d {
 public:
  ConvTranspose2d() = default;
  ConvTranspose2d(int in_channels, int out_channels, int kernel, int stride,
                  int padding, int output_padding, std::mt19937_64& rng,
                  bool bias = true);

  Var forward(const Var& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out);

 private:
  Var weight_, bias_;
  int stride_ = 1;
  int padding_ = 0;
  int output_padding_ = 0;
};

/// Parameter-free instance normalization (per-sample, per-channel).
class InstanceNorm2d {
 public:
  Var forward(const Var& x) const { return instance_norm2d(x, eps_); }

 private:
  double eps_ = 1e-5;
};

}  // namespace nightforge::nn
