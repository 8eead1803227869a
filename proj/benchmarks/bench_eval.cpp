#include <benchmark/benchmark.h>

#include <random>

#include "nightforge/eval/metrics.hpp"

using namespace nightforge;
using eval::ImageSample;

namespace {

std::vector<ImageSample> synthetic_corpus(int images, int boxes_per_image) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ImageSample> corpus(static_cast<size_t>(images));
  for (auto& sample : corpus) {
    for (int i = 0; i < boxes_per_image; ++i) {
      const double w = 0.05 + u(rng) * 0.3, h = 0.05 + u(rng) * 0.3;
      const BoundingBox box{w / 2 + u(rng) * (1 - w), h / 2 + u(rng) * (1 - h),
                            w, h};
      sample.ground_truth.push_back({static_cast<int>(u(rng) * 2), box, {}});
      BoundingBox jittered = box;
      jittered.cx = std::clamp(box.cx + (u(rng) - 0.5) * 0.05, box.w / 2,
                               1 - box.w / 2);
      sample.predictions.push_back(
          {static_cast<int>(u(rng) * 2), u(rng), jittered});
    }
  }
  return corpus;
}

void BM_MatchImage(benchmark::State& state) {
  const auto corpus = synthetic_corpus(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result =
        eval::match(corpus[0].predictions, corpus[0].ground_truth, 0.5);
    benchmark::DoNotOptimize(result.true_positive.size());
  }
}
BENCHMARK(BM_MatchImage)->Arg(8)->Arg(64)->Arg(256);

void BM_MapSummary(benchmark::State& state) {
  const auto corpus = synthetic_corpus(static_cast<int>(state.range(0)), 8);
  const std::vector<std::string> names = {"Sedan", "SVP_BV"};
  for (auto _ : state) {
    auto table = eval::map_summary(corpus, names);
    benchmark::DoNotOptimize(table.all.map50);
  }
}
BENCHMARK(BM_MapSummary)->Arg(10)->Arg(100)->Arg(500);

}  // namespace
