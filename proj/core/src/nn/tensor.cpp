#include "nightforge/nn/tensor.hpp"

#include <cmath>

#include "nightforge/core/errors.hpp"

namespace nightforge::nn {
namespace {

std::int64_t count_elements(const std::vector<int>& shape) {
  std::int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw ShapeError("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
  buffer_ = std::make_shared<std::vector<double>>(
      static_cast<size_t>(count_elements(shape_)), 0.0);
}

Tensor Tensor::full(std::vector<int> shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return t;
}

Tensor Tensor::from_values(std::vector<int> shape, std::vector<double> values) {
  if (count_elements(shape) != static_cast<std::int64_t>(values.size())) {
    throw ShapeError("value count does not match shape");
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.buffer_ = std::make_shared<std::vector<double>>(std::move(values));
  return t;
}

Tensor Tensor::randn(std::vector<int> shape, std::mt19937_64& rng,
                     double stddev, double mean) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> dist(mean, stddev);
  for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = dist(rng);
  return t;
}

Tensor Tensor::uniform(std::vector<int> shape, std::mt19937_64& rng, double lo,
                       double hi) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = dist(rng);
  return t;
}

std::int64_t Tensor::numel() const {
  return buffer_ ? static_cast<std::int64_t>(buffer_->size()) : 0;
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (count_elements(shape) != numel()) {
    throw ShapeError("reshape changes element count");
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.buffer_ = buffer_;
  return t;
}

Tensor Tensor::clone() const {
  Tensor t;
  t.shape_ = shape_;
  t.buffer_ = buffer_ ? std::make_shared<std::vector<double>>(*buffer_) : nullptr;
  return t;
}

bool Tensor::all_finite() const {
  for (std::int64_t i = 0; i < numel(); ++i) {
    if (!std::isfinite((*this)[i])) return false;
  }
  return true;
}

void Tensor::fill(double value) {
  for (auto& v : *buffer_) v = value;
}

void Tensor::add_(const Tensor& other) {
  if (!same_shape(other)) throw ShapeError("add_: shape mismatch");
  for (std::int64_t i = 0; i < numel(); ++i) (*this)[i] += other[i];
}

void Tensor::add_scaled_(const Tensor& other, double scale) {
  if (!same_shape(other)) throw ShapeError("add_scaled_: shape mismatch");
  for (std::int64_t i = 0; i < numel(); ++i) (*this)[i] += scale * other[i];
}

void Tensor::scale_(double factor) {
  for (auto& v : *buffer_) v *= factor;
}

Tensor scalar_tensor(double value) {
  return Tensor::from_values({1}, {value});
}

}  // namespace nightforge::nn
