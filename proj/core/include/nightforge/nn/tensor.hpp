#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace nightforge::nn {

/// Dense double-precision tensor. Handle semantics: copies share the
/// underlying buffer (use clone() for an independent copy). Always
/// contiguous, row-major over the shape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, double value);
  static Tensor from_values(std::vector<int> shape, std::vector<double> values);
  static Tensor randn(std::vector<int> shape, std::mt19937_64& rng,
                      double stddev = 1.0, double mean = 0.0);
  static Tensor uniform(std::vector<int> shape, std::mt19937_64& rng,
                        double lo = 0.0, double hi = 1.0);

  bool defined() const { return buffer_ != nullptr; }
  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  std::int64_t numel() const;

  double* data() { return buffer_->data(); }
  const double* data() const { return buffer_->data(); }
  double& operator[](std::int64_t i) { return (*buffer_)[static_cast<size_t>(i)]; }
  double operator[](std::int64_t i) const { return (*buffer_)[static_cast<size_t>(i)]; }

  /// Reinterprets the buffer under a new shape with the same element count.
  /// The result shares storage with this tensor.
  Tensor reshaped(std::vector<int> shape) const;

  Tensor clone() const;
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  void fill(double value);
  void add_(const Tensor& other);            // elementwise +=
  void add_scaled_(const Tensor& other, double scale);
  void scale_(double factor);

 private:
  std::vector<int> shape_;
  std::shared_ptr<std::vector<double>> buffer_;
};

/// Scalar convenience: wraps one value in a [1] tensor.
Tensor scalar_tensor(double value);

}  // namespace nightforge::nn
