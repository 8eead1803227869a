#include "nightforge/nn/layers.hpp"

namespace nightforge::nn {

namespace {
constexpr double kInitStd = 0.02;
}

Conv2d::Conv2d(int in_channels, int out_channels, int kernel, int stride,
               int padding, std::mt19937_64& rng, bool bias)
    : stride_(stride), padding_(padding) {
  weight_ = Var(Tensor::randn({out_channels, in_channels, kernel, kernel}, rng,
                              kInitStd),
                /*requires_grad=*/true);
  if (bias) {
    bias_ = Var(Tensor::zeros({out_channels}), /*requires_grad=*/true);
  }
}

Var Conv2d::forward(const Var& x) const {
  return conv2d(x, weight_, bias_, stride_, padding_);
}

void Conv2d::collect(const std::string& prefix, std::vector<NamedParam>& out) {
  out.push_back({prefix + ".weight", &weight_});
  if (bias_.defined()) out.push_back({prefix + ".bias", &bias_});
}

ConvTranspose2d::ConvTranspose2d(int in_channels, int out_channels, int kernel,
                                 int stride, int padding, int output_padding,
                                 std::mt19937_64& rng, bool bias)
    : stride_(stride), padding_(padding), output_padding_(output_padding) {
  weight_ = Var(Tensor::randn({in_channels, out_channels, kernel, kernel}, rng,
                              kInitStd),
                /*requires_grad=*/true);
  if (bias) {
    bias_ = Var(Tensor::zeros({out_channels}), /*requires_grad=*/true);
  }
}

Var ConvTranspose2d::forward(const Var& x) const {
  return conv_transpose2d(x, weight_, bias_, stride_, padding_,
                          output_padding_);
}

void ConvTranspose2d::collect(const std::string& prefix,
                              std::vector<NamedParam>& out) {
  out.push_back({prefix + ".weight", &weight_});
  if (bias_.defined()) out.push_back({prefix + ".bias", &bias_});
}

}  // namespace nightforge::nn
