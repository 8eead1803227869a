#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nightforge/core/errors.hpp"
#include "nightforge/nn/adam.hpp"
#include "nightforge/nn/autograd.hpp"
#include "nightforge/nn/layers.hpp"
#include "nightforge/nn/serialize.hpp"
#include "support/gradcheck.hpp"
#include "support/tempdir.hpp"

using namespace nightforge::nn;
using nightforge::ShapeError;
using testsupport::gradcheck;

namespace {
std::mt19937_64 rng(42);
}

TEST_CASE("elementwise op gradients match finite differences") {
  const Tensor x = Tensor::randn({2, 3, 4}, rng);
  const Tensor y = Tensor::randn({2, 3, 4}, rng);

  CHECK(gradcheck([&](const Var& v) { return mean_all(square(add(v, Var(y)))); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(sub(v, Var(y)))); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) { return mean_all(mul(v, Var(y))); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(add_scalar(v, 1.5))); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(mul_scalar(v, -2.0))); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) { return mean_all(abs_elem(v)); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(tanh_elem(v))); }, x) < 1e-6);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(relu(v))); }, x) < 1e-6);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(leaky_relu(v, 0.2))); }, x) < 1e-6);
}

TEST_CASE("scale_by propagates into both tensor and gate") {
  const Tensor x = Tensor::randn({3, 3}, rng);
  CHECK(gradcheck([&](const Var& v) {
          Var gamma(scalar_tensor(0.7), false);
          return mean_all(square(scale_by(v, gamma)));
        }, x) < 1e-7);
  const Tensor g0 = scalar_tensor(0.3);
  CHECK(gradcheck([&](const Var& g) {
          Var base(x);
          return mean_all(square(scale_by(base, g)));
        }, g0) < 1e-7);
}

TEST_CASE("softmax/bmm/transpose/reshape gradients") {
  const Tensor x = Tensor::randn({2, 4, 3}, rng);
  const Tensor y = Tensor::randn({2, 3, 5}, rng);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(softmax_lastdim(v))); }, x) < 1e-6);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(bmm(v, Var(y)))); }, x) < 1e-6);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(bmm(Var(x), v))); }, y) < 1e-6);
  CHECK(gradcheck([&](const Var& v) { return mean_all(square(transpose_last2(v))); }, x) < 1e-7);
  CHECK(gradcheck([&](const Var& v) {
          return mean_all(square(reshape(v, {2, 12})));
        }, x) < 1e-7);
}

TEST_CASE("softmax rows sum to one") {
  const Tensor x = Tensor::randn({3, 7}, rng, 4.0);
  const Var s = softmax_lastdim(Var(x));
  for (int r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 7; ++c) sum += s.value()[r * 7 + c];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("conv2d gradients across geometries") {
  struct Geometry { int in_ch, out_ch, k, stride, pad, size; };
  for (const auto g : {Geometry{2, 3, 3, 1, 1, 5}, Geometry{2, 2, 4, 2, 1, 6},
                       Geometry{3, 2, 7, 1, 0, 8}}) {
    const Tensor x = Tensor::randn({2, g.in_ch, g.size, g.size}, rng);
    const Tensor w = Tensor::randn({g.out_ch, g.in_ch, g.k, g.k}, rng, 0.3);
    const Tensor b = Tensor::randn({g.out_ch}, rng, 0.3);
    CHECK(gradcheck([&](const Var& v) {
            return mean_all(square(conv2d(v, Var(w), Var(b), g.stride, g.pad)));
          }, x) < 1e-6);
    CHECK(gradcheck([&](const Var& v) {
            return mean_all(square(conv2d(Var(x), v, Var(b), g.stride, g.pad)));
          }, w) < 1e-6);
    CHECK(gradcheck([&](const Var& v) {
            return mean_all(square(conv2d(Var(x), Var(w), v, g.stride, g.pad)));
          }, b) < 1e-6);
  }
}

TEST_CASE("conv_transpose2d matches geometry and gradients") {
  const Tensor x = Tensor::randn({2, 3, 4, 4}, rng);
  const Tensor w = Tensor::randn({3, 2, 3, 3}, rng, 0.3);
  const Tensor b = Tensor::randn({2}, rng, 0.3);
  const Var out = conv_transpose2d(Var(x), Var(w), Var(b), 2, 1, 1);
  CHECK(out.shape() == std::vector<int>{2, 2, 8, 8});
  CHECK(gradcheck([&](const Var& v) {
          return mean_all(square(conv_transpose2d(v, Var(w), Var(b), 2, 1, 1)));
        }, x) < 1e-6);
  CHECK(gradcheck([&](const Var& v) {
          return mean_all(square(conv_transpose2d(Var(x), v, Var(b), 2, 1, 1)));
        }, w) < 1e-6);
  CHECK_THROWS_AS(conv_transpose2d(Var(x), Var(w), Var(b), 2, 1, 2), ShapeError);
}

TEST_CASE("instance_norm2d normalizes and backpropagates") {
  const Tensor x = Tensor::randn({2, 3, 4, 4}, rng, 3.0, 1.0);
  const Var y = instance_norm2d(Var(x));
  // per-(sample, channel) mean 0, variance 1
  for (int bc = 0; bc < 6; ++bc) {
    double mean = 0.0, var = 0.0;
    for (int i = 0; i < 16; ++i) mean += y.value()[bc * 16 + i];
    mean /= 16;
    for (int i = 0; i < 16; ++i) {
      const double d = y.value()[bc * 16 + i] - mean;
      var += d * d;
    }
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var / 16 == doctest::Approx(1.0).epsilon(1e-3));
  }
  const Tensor probe = Tensor::randn({2, 3, 4, 4}, rng, 0.5);
  CHECK(gradcheck([&](const Var& v) {
          return mean_all(mul(instance_norm2d(v), Var(probe)));
        }, x, 1e-5) < 1e-5);
}

TEST_CASE("reflection_pad2d mirrors and backpropagates") {
  Tensor x({1, 1, 3, 3});
  for (int i = 0; i < 9; ++i) x[i] = i;
  const Var padded = reflection_pad2d(Var(x), 1);
  CHECK(padded.shape() == std::vector<int>{1, 1, 5, 5});
  // corner reflects to element (1,1) of the source
  CHECK(padded.value()[0] == doctest::Approx(4.0));
  CHECK(gradcheck([&](const Var& v) {
          return mean_all(square(reflection_pad2d(v, 2)));
        }, x) < 1e-7);
}

TEST_CASE("backward accumulates through shared subexpressions") {
  Tensor x0 = scalar_tensor(3.0);
  Var x(x0, true);
  Var y = add(square(x), mul(x, x));  // 2x^2, dy/dx = 4x
  y.backward();
  CHECK(x.grad()[0] == doctest::Approx(12.0));
}

TEST_CASE("Adam takes the documented first step") {
  Var p(scalar_tensor(1.0), true);
  Adam opt({{"p", &p}}, 0.1, 0.9, 0.999);
  Var loss = mean_all(square(p));  // grad 2
  loss.backward();
  opt.step();
  // First step moves by lr * g / (|g| + eps) ~= lr regardless of scale.
  CHECK(p.value()[0] == doctest::Approx(1.0 - 0.1).epsilon(1e-6));
}

TEST_CASE("tensor serialization round trip") {
  testsupport::TempDir dir("tensors");
  const Tensor a = Tensor::randn({2, 3}, rng);
  const Tensor b = Tensor::randn({4}, rng);
  save_tensors(dir / "t.nft", {{"a", a}, {"b", b}});
  const auto loaded = load_tensors(dir / "t.nft");
  REQUIRE(loaded.size() == 2);
  REQUIRE(loaded.at("a").same_shape(a));
  for (std::int64_t i = 0; i < a.numel(); ++i) CHECK(loaded.at("a")[i] == a[i]);
  for (std::int64_t i = 0; i < b.numel(); ++i) CHECK(loaded.at("b")[i] == b[i]);
}
