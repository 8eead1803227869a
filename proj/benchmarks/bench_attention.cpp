#include <benchmark/benchmark.h>

#include <random>

#include "nightforge/gan/attention.hpp"

using namespace nightforge;
using nn::Tensor;
using nn::Var;

namespace {

// Linear-complexity factorization vs. the quadratic n x n formulation.
// The crossover is the whole point: at generator bottleneck sizes the
// factorized context stays tiny while the dense matrix grows as n^2.

void BM_EfficientAttention(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  const Tensor q = Tensor::randn({1, n, 32}, rng);
  const Tensor k = Tensor::randn({1, n, 32}, rng);
  const Tensor v = Tensor::randn({1, n, 64}, rng);
  for (auto _ : state) {
    auto result = gan::efficient_attention(Var(q), Var(k), Var(v));
    benchmark::DoNotOptimize(result.output.value().data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_EfficientAttention)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_DenseAttention(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  const Tensor q = Tensor::randn({1, n, 32}, rng);
  const Tensor k = Tensor::randn({1, n, 32}, rng);
  const Tensor v = Tensor::randn({1, n, 64}, rng);
  for (auto _ : state) {
    // softmax(Q) softmax_n(K)^T first: materializes the n x n matrix
    Var qn = nn::softmax_lastdim(Var(q));
    Var kn = nn::transpose_last2(nn::softmax_lastdim(nn::transpose_last2(Var(k))));
    Var scores = nn::bmm(qn, nn::transpose_last2(kn));
    Var out = nn::bmm(scores, Var(v));
    benchmark::DoNotOptimize(out.value().data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DenseAttention)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

}  // namespace
