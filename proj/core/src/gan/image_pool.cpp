#include "nightforge/gan/image_pool.hpp"

#include <cstring>

#include "nightforge/core/errors.hpp"

namespace nightforge::gan {

ImagePool::ImagePool(int capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(seed) {}

nn::Tensor ImagePool::query(const nn::Tensor& fake) {
  if (capacity_ <= 0) return fake;
  if (fake.ndim() != 4) throw ShapeError("image pool expects [B,C,H,W]");
  const int batch = fake.dim(0);
  const std::int64_t sample_elems = fake.numel() / batch;
  nn::Tensor out = fake.clone();
  for (int b = 0; b < batch; ++b) {
    const double* src = fake.data() + b * sample_elems;
    nn::Tensor sample({fake.dim(1), fake.dim(2), fake.dim(3)});
    std::memcpy(sample.data(), src, sizeof(double) * sample_elems);
    if (static_cast<int>(images_.size()) < capacity_) {
      images_.push_back(sample);
      continue;  // pass the fresh fake through
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng_) > 0.5) {
      std::uniform_int_distribution<size_t> pick(0, images_.size() - 1);
      const size_t idx = pick(rng_);
      std::memcpy(out.data() + b * sample_elems, images_[idx].data(),
                  sizeof(double) * sample_elems);
      images_[idx] = sample;
    }
  }
  return out;
}

}  // namespace nightforge::gan
