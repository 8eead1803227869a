#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nightforge/core/errors.hpp"
#include "nightforge/gan/attention.hpp"
#include "nightforge/gan/config.hpp"
#include "nightforge/gan/losses.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

using namespace nightforge;
using namespace nightforge::gan;
using nn::Tensor;
using nn::Var;
using testsupport::gradcheck;

namespace {
std::mt19937_64 rng(2024);
}

TEST_CASE("generator adversarial loss hits zero exactly at target scores") {
  CHECK(loss_gan_generator(Var(Tensor::full({1, 1, 3, 3}, 1.0))).item() == 0.0);
  CHECK(loss_gan_generator(Var(Tensor::full({1, 1, 3, 3}, 0.0))).item() ==
        doctest::Approx(1.0));
  CHECK(loss_gan_generator(Var(Tensor::from_values({2}, {0.5, 1.5}))).item() ==
        doctest::Approx(0.25));
}

TEST_CASE("discriminator adversarial loss examples") {
  const Var ones(Tensor::full({4}, 1.0));
  const Var zeros(Tensor::full({4}, 0.0));
  const Var halves(Tensor::full({4}, 0.5));
  CHECK(loss_gan_discriminator(ones, zeros).item() == 0.0);
  CHECK(loss_gan_discriminator(halves, halves).item() == doctest::Approx(0.5));
  CHECK(loss_gan_discriminator(zeros, ones).item() == doctest::Approx(2.0));
}

TEST_CASE("cycle loss examples and shape guard") {
  const Var x(Tensor::full({1, 3, 2, 2}, 0.3));
  const Var y(Tensor::full({1, 3, 2, 2}, -0.2));
  CHECK(loss_cycle(x, x, y, y).item() == 0.0);

  Tensor x_off = x.value().clone();
  Tensor y_off = y.value().clone();
  for (std::int64_t i = 0; i < x_off.numel(); ++i) {
    x_off[i] += 0.1;
    y_off[i] += 0.1;
  }
  CHECK(loss_cycle(x, Var(x_off), y, Var(y_off)).item() == doctest::Approx(0.2));

  Tensor x_side = x.value().clone();
  for (std::int64_t i = 0; i < x_side.numel(); ++i) x_side[i] += 0.3;
  CHECK(loss_cycle(x, Var(x_side), y, y).item() == doctest::Approx(0.3));

  CHECK_THROWS_AS(loss_cycle(x, Var(Tensor::zeros({1, 3, 2, 3})), y, y),
                  ShapeError);
}

TEST_CASE("identity loss examples") {
  const Var x(Tensor::full({2, 2}, 0.4));
  const Var y(Tensor::full({2, 2}, -0.6));
  CHECK(loss_identity(y, y, x, x).item() == 0.0);

  Tensor y_off = y.value().clone();
  for (std::int64_t i = 0; i < y_off.numel(); ++i) y_off[i] += 0.2;
  CHECK(loss_identity(y, Var(y_off), x, x).item() == doctest::Approx(0.2));

  Tensor x_off = x.value().clone();
  for (std::int64_t i = 0; i < x_off.numel(); ++i) x_off[i] -= 0.1;
  Tensor y_off1 = y.value().clone();
  for (std::int64_t i = 0; i < y_off1.numel(); ++i) y_off1[i] += 0.1;
  CHECK(loss_identity(y, Var(y_off1), x, Var(x_off)).item() ==
        doctest::Approx(0.2));
}

TEST_CASE("total objective weighting at the default weights") {
  auto zero = [] { return Var(nn::scalar_tensor(0.0)); };
  LossParts parts{zero(), zero(), zero(), zero()};
  CHECK(total_objective(parts, 10.0, 0.5).item() == 0.0);

  parts.cycle = Var(nn::scalar_tensor(1.0));
  CHECK(total_objective(parts, 10.0, 0.5).item() == doctest::Approx(10.0));

  parts.identity = Var(nn::scalar_tensor(1.0));
  CHECK(total_objective(parts, 10.0, 0.5).item() == doctest::Approx(10.5));
}

TEST_CASE("total objective is linear in both weights") {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    LossParts parts{Var(nn::scalar_tensor(u(rng))), Var(nn::scalar_tensor(u(rng))),
                    Var(nn::scalar_tensor(u(rng))), Var(nn::scalar_tensor(u(rng)))};
    const double lc = u(rng), li = u(rng);
    const double base = total_objective(parts, 0.0, 0.0).item();
    const double with_cyc = total_objective(parts, lc, 0.0).item();
    const double doubled = total_objective(parts, 2.0 * lc, 0.0).item();
    CHECK(doubled - base == doctest::Approx(2.0 * (with_cyc - base)).epsilon(1e-12));
    const double with_id = total_objective(parts, lc, li).item();
    const double id_doubled = total_objective(parts, lc, 2.0 * li).item();
    CHECK(id_doubled - with_cyc ==
          doctest::Approx(2.0 * (with_id - with_cyc)).epsilon(1e-12));
  }
}

TEST_CASE("losses are non-negative with zero only at the analytic minimum") {
  for (int trial = 0; trial < 30; ++trial) {
    const Tensor scores = Tensor::randn({1, 1, 4, 4}, rng);
    const double g = loss_gan_generator(Var(scores)).item();
    CHECK(g >= 0.0);
    const Tensor a = Tensor::randn({3, 3}, rng);
    const Tensor b = Tensor::randn({3, 3}, rng);
    CHECK(loss_cycle(Var(a), Var(b), Var(a), Var(a)).item() >= 0.0);
  }
}

TEST_CASE("loss gradients match central finite differences on 4x4 tensors") {
  const Tensor scores = Tensor::randn({1, 1, 4, 4}, rng);
  CHECK(gradcheck([](const Var& s) { return loss_gan_generator(s); }, scores) <
        1e-4);

  const Tensor real = Tensor::randn({1, 1, 4, 4}, rng);
  CHECK(gradcheck([&](const Var& f) {
          return loss_gan_discriminator(Var(real), f);
        }, scores) < 1e-4);
  CHECK(gradcheck([&](const Var& r) {
          return loss_gan_discriminator(r, Var(scores));
        }, real) < 1e-4);

  const Tensor x = Tensor::randn({1, 1, 4, 4}, rng);
  const Tensor y = Tensor::randn({1, 1, 4, 4}, rng);
  const Tensor xr = Tensor::randn({1, 1, 4, 4}, rng);
  const Tensor yr = Tensor::randn({1, 1, 4, 4}, rng);
  CHECK(gradcheck([&](const Var& v) {
          return loss_cycle(Var(x), v, Var(y), Var(yr));
        }, xr) < 1e-4);
  CHECK(gradcheck([&](const Var& v) {
          return loss_identity(Var(y), v, Var(x), Var(xr));
        }, yr) < 1e-4);
  CHECK(gradcheck([&](const Var& v) {
          LossParts parts{loss_gan_generator(v),
                          Var(nn::scalar_tensor(0.0)),
                          loss_cycle(Var(x), v, Var(y), Var(yr)),
                          loss_identity(Var(y), v, Var(x), Var(xr))};
          return total_objective(parts, 10.0, 0.5);
        }, yr) < 1e-4);
}

TEST_CASE("lr schedule: constant phase, ramp, tail") {
  TrainConfig cfg;  // defaults: lr0 2e-4, 100 + 100
  CHECK(lr_schedule(50, cfg) == 0.0002);
  CHECK(lr_schedule(100, cfg) == 0.0002);
  CHECK(lr_schedule(cfg.n_epochs + cfg.n_epochs_decay + 1, cfg) == 0.0);

  TrainConfig table2 = cfg;
  table2.n_epochs_decay = 200;
  CHECK(lr_schedule(200, table2) == doctest::Approx(0.0001).epsilon(1e-15));
  CHECK(lr_schedule(200, table2) == 0.0002 * (1.0 - 100.0 / 200.0));

  // continuity at the knee: both branches give lr0
  CHECK(lr_schedule(cfg.n_epochs, cfg) == cfg.lr0);
  CHECK(lr_schedule(cfg.n_epochs + 1, cfg) ==
        doctest::Approx(cfg.lr0 * (1.0 - 1.0 / cfg.n_epochs_decay)));

  // non-increasing over the whole range
  double prev = lr_schedule(1, cfg);
  for (int t = 2; t <= cfg.n_epochs + cfg.n_epochs_decay + 10; ++t) {
    const double now = lr_schedule(t, cfg);
    CHECK(now <= prev);
    prev = now;
  }

  TrainConfig no_decay = cfg;
  no_decay.n_epochs_decay = 0;
  CHECK(lr_schedule(no_decay.n_epochs + 1, no_decay) == 0.0);
  CHECK_THROWS_AS(lr_schedule(0, cfg), ConfigError);
}

TEST_CASE("config validation") {
  TrainConfig bad;
  bad.lambda_cyc = -1.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  TrainConfig bad2;
  bad2.n_epochs = -1;
  CHECK_THROWS_AS(validate(bad2), ConfigError);
  GeneratorConfig gen;
  gen.attention_positions = {1, 1};
  CHECK_THROWS_AS(validate(gen), ConfigError);
  gen.attention_positions = {3};
  CHECK_THROWS_AS(validate(gen), ConfigError);
}

TEST_CASE("efficient attention: single position returns the value") {
  const Tensor q = Tensor::randn({1, 1, 4}, rng);
  const Tensor k = Tensor::randn({1, 1, 4}, rng);
  const Tensor v = Tensor::randn({1, 1, 6}, rng);
  const auto result = efficient_attention(Var(q), Var(k), Var(v));
  for (int d = 0; d < 6; ++d) {
    CHECK(result.output.value()[d] == doctest::Approx(v[d]).epsilon(1e-12));
  }
}

TEST_CASE("efficient attention: constant values give that constant") {
  const int n = 5, dk = 3, dv = 4;
  const Tensor q = Tensor::randn({1, n, dk}, rng);
  const Tensor k = Tensor::randn({1, n, dk}, rng);
  Tensor v({1, n, dv});
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dv; ++d) v[i * dv + d] = 0.5 + 0.25 * d;
  }
  const auto result = efficient_attention(Var(q), Var(k), Var(v));
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dv; ++d) {
      CHECK(result.output.value()[i * dv + d] ==
            doctest::Approx(0.5 + 0.25 * d).epsilon(1e-9));
    }
  }
}

TEST_CASE("efficient attention equals the dense oracle on toy sizes") {
  for (const int n : {2, 3, 6, 8}) {
    const Tensor q = Tensor::randn({2, n, 3}, rng);
    const Tensor k = Tensor::randn({2, n, 3}, rng);
    const Tensor v = Tensor::randn({2, n, 5}, rng);
    const auto fast = efficient_attention(Var(q), Var(k), Var(v));
    const Tensor dense = testsupport::oracle::dense_attention(q, k, v);
    for (std::int64_t i = 0; i < dense.numel(); ++i) {
      CHECK(std::abs(fast.output.value()[i] - dense[i]) < 1e-5);
    }
  }
}

TEST_CASE("efficient attention is differentiable end to end") {
  const Tensor q = Tensor::randn({1, 4, 3}, rng);
  const Tensor k = Tensor::randn({1, 4, 3}, rng);
  const Tensor v = Tensor::randn({1, 4, 3}, rng);
  CHECK(gradcheck([&](const Var& x) {
          return mean_all(square(efficient_attention(x, Var(k), Var(v)).output));
        }, q) < 1e-6);
  CHECK(gradcheck([&](const Var& x) {
          return mean_all(square(efficient_attention(Var(q), x, Var(v)).output));
        }, k) < 1e-6);
  CHECK(gradcheck([&](const Var& x) {
          return mean_all(square(efficient_attention(Var(q), Var(k), x).output));
        }, v) < 1e-6);
}

TEST_CASE("attention cache enforces single production and consumption") {
  AttentionCache cache;
  cache.put(2, Var(nn::scalar_tensor(1.0)));
  CHECK_THROWS_AS(cache.put(2, Var(nn::scalar_tensor(2.0))), CacheError);
  CHECK(!cache.empty());
  cache.take(2);
  CHECK(cache.empty());
  CHECK_THROWS_AS(cache.take(2), CacheError);
}
