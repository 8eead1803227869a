#pragma once

#include "nightforge/core/image.hpp"
#include "nightforge/nn/tensor.hpp"

namespace nightforge::gan {

/// RGB image -> [3,H,W] tensor scaled to [-1, 1].
nn::Tensor image_to_tensor(const Image& image);

/// [3,H,W] (or [1,3,H,W]) tensor in [-1, 1] -> RGB image. Values are
/// clamped before quantization.
Image tensor_to_image(const nn::Tensor& tensor);

/// Horizontal mirror, used by the optional training-time flip.
nn::Tensor flip_horizontal(const nn::Tensor& chw);

}  // namespace nightforge::gan
