#include <benchmark/benchmark.h>

#include <random>

#include "nightforge/gan/generator.hpp"
#include "nightforge/nn/autograd.hpp"

using namespace nightforge;
using nn::Tensor;
using nn::Var;

namespace {

void BM_Conv2dForward(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const Tensor x = Tensor::randn({1, 64, size, size}, rng);
  const Tensor w = Tensor::randn({64, 64, 3, 3}, rng, 0.05);
  const Tensor b = Tensor::randn({64}, rng, 0.05);
  for (auto _ : state) {
    Var out = nn::conv2d(Var(x), Var(w), Var(b), 1, 1);
    benchmark::DoNotOptimize(out.value().data());
  }
}
BENCHMARK(BM_Conv2dForward)->Arg(16)->Arg(32)->Arg(64);

void BM_GeneratorForward(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  gan::GeneratorConfig cfg;
  cfg.input_size = size;
  cfg.base_channels = 16;
  cfg.n_residual_blocks = 4;
  gan::Generator g(cfg, rng);
  const Tensor x = Tensor::randn({1, 3, size, size}, rng, 0.3);
  for (auto _ : state) {
    auto out = g.forward(Var(x));
    benchmark::DoNotOptimize(out.image.value().data());
  }
}
BENCHMARK(BM_GeneratorForward)->Arg(32)->Arg(64)->Arg(128);

void BM_GeneratorTrainStep(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  gan::GeneratorConfig cfg;
  cfg.input_size = size;
  cfg.base_channels = 8;
  cfg.n_residual_blocks = 2;
  gan::Generator g(cfg, rng);
  const Tensor x = Tensor::randn({1, 3, size, size}, rng, 0.3);
  for (auto _ : state) {
    auto out = g.forward(Var(x));
    Var loss = nn::mean_all(nn::square(out.image));
    loss.backward();
    benchmark::DoNotOptimize(loss.item());
  }
}
BENCHMARK(BM_GeneratorTrainStep)->Arg(32)->Arg(64);

}  // namespace
