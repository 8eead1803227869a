#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "nightforge/core/errors.hpp"
#include "nightforge/dataset/forge.hpp"
#include "support/tempdir.hpp"

using namespace nightforge;
using namespace nightforge::dataset;

namespace {

std::vector<LabeledImage> make_pool(const std::filesystem::path& dir,
                                    const std::string& prefix, int count,
                                    Domain domain,
                                    int sources_share_every = 0) {
  std::filesystem::create_directories(dir);
  std::vector<LabeledImage> pool;
  for (int i = 0; i < count; ++i) {
    const auto path = dir / (prefix + std::to_string(i) + ".png");
    std::ofstream(path) << "stub-image-" << prefix << i;
    LabeledImage item;
    item.image.path = path;
    item.image.width_px = 64;
    item.image.height_px = 64;
    item.image.domain = domain;
    if (domain == Domain::kNightTransferred) {
      // optionally collapse consecutive images onto one day source
      const int source_index =
          sources_share_every > 1 ? i / sources_share_every : i;
      item.image.source_of =
          std::filesystem::path("day") / ("src" + std::to_string(source_index) + ".png");
    }
    item.annotations = {{i % 2, {0.5, 0.5, 0.2, 0.2}, {}}};
    pool.push_back(std::move(item));
  }
  return pool;
}

MixSpec counts_spec(std::uint64_t seed, int tr, int ta, int vr, int va, int sr,
                    int sa) {
  MixSpec spec;
  spec.seed = seed;
  spec.splits["train"] = SplitSpec{tr, ta, {}, {}, {}};
  spec.splits["val"] = SplitSpec{vr, va, {}, {}, {}};
  spec.splits["test"] = SplitSpec{sr, sa, {}, {}, {}};
  return spec;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("reference split sizes (287/63/30) reconstruct exactly") {
  testsupport::TempDir dir("table1");
  const auto real = make_pool(dir / "real", "r", 187, Domain::kNightReal);
  const auto aug = make_pool(dir / "aug", "a", 193, Domain::kNightTransferred);
  const auto spec = counts_spec(7, 124, 163, 43, 20, 20, 10);

  const auto manifest = assemble(real, aug, spec, dir / "out");
  REQUIRE(manifest.split("train"));
  CHECK(manifest.split("train")->size() == 287);
  CHECK(manifest.split("val")->size() == 63);
  CHECK(manifest.split("test")->size() == 30);

  const auto stats = composition_stats(manifest);
  CHECK(stats.per_split.at("train").real == 124);
  CHECK(stats.per_split.at("train").augmented == 163);
  CHECK(stats.per_split.at("val").real == 43);
  CHECK(stats.per_split.at("test").augmented == 10);
  CHECK(stats.per_split.at("train").real_ratio.value() ==
        doctest::Approx(124.0 / 287.0).epsilon(1e-12));
  CHECK(stats.overall.real == 187);
  CHECK(stats.overall.real_ratio.value() ==
        doctest::Approx(187.0 / 380.0).epsilon(1e-12));

  const auto report = validate(manifest);
  CHECK(report.clean());
  CHECK(report.images_checked == 380);
  CHECK(std::filesystem::exists(dir / "out" / "dataset.yaml"));
  const std::string yaml = slurp(dir / "out" / "dataset.yaml");
  CHECK(yaml.find("0: Sedan") != std::string::npos);
  CHECK(yaml.find("1: SVP_BV") != std::string::npos);
}

TEST_CASE("assembly is a pure function of pools and spec") {
  testsupport::TempDir dir("pure");
  const auto real = make_pool(dir / "real", "r", 12, Domain::kNightReal);
  const auto aug = make_pool(dir / "aug", "a", 12, Domain::kNightTransferred);
  const auto spec = counts_spec(99, 4, 4, 2, 2, 1, 1);
  assemble(real, aug, spec, dir / "out1");
  assemble(real, aug, spec, dir / "out2");
  CHECK(slurp(dir / "out1" / "manifest.json") ==
        slurp(dir / "out2" / "manifest.json"));

  auto other_seed = spec;
  other_seed.seed = 100;
  assemble(real, aug, other_seed, dir / "out3");
  CHECK(slurp(dir / "out1" / "manifest.json") !=
        slurp(dir / "out3" / "manifest.json"));
}

TEST_CASE("ratio specs resolve; counts win when both are present") {
  CHECK(resolve(SplitSpec{{}, {}, 10, 0.5, {}}, "x").real == 5);
  CHECK(resolve(SplitSpec{{}, {}, 10, {}, 0.3}, "x").real == 7);
  const auto both = resolve(SplitSpec{3, 4, 100, 0.9, {}}, "x");
  CHECK(both.real == 3);
  CHECK(both.augmented == 4);
  CHECK_THROWS_AS(resolve(SplitSpec{{}, {}, 10, 1.5, {}}, "x"), ConfigError);
  CHECK_THROWS_AS(resolve(SplitSpec{{}, {}, 10, 0.4, 0.4}, "x"), ConfigError);
  CHECK_THROWS_AS(resolve(SplitSpec{{}, {}, 10, {}, {}}, "x"), ConfigError);
  CHECK(resolve(SplitSpec{}, "x").total() == 0);
}

TEST_CASE("shortfalls and duplicate stems are rejected") {
  testsupport::TempDir dir("errs");
  const auto real = make_pool(dir / "real", "r", 3, Domain::kNightReal);
  const auto aug = make_pool(dir / "aug", "a", 3, Domain::kNightTransferred);
  try {
    assemble(real, aug, counts_spec(1, 5, 0, 0, 0, 0, 0), dir / "out");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("train") != std::string::npos);
    CHECK(what.find("5") != std::string::npos);
  }
  auto dup = real;
  dup.push_back(real[0]);
  CHECK_THROWS_AS(assemble(dup, aug, counts_spec(1, 1, 0, 0, 0, 0, 0), dir / "o2"),
                  ValidationError);
}

TEST_CASE("derivatives of one day source never straddle splits") {
  testsupport::TempDir dir("leak");
  const auto real = make_pool(dir / "real", "r", 6, Domain::kNightReal);
  // 12 augmented images over 6 sources, two derivatives each
  const auto aug =
      make_pool(dir / "aug", "a", 12, Domain::kNightTransferred, 2);
  const auto manifest =
      assemble(real, aug, counts_spec(3, 2, 4, 2, 4, 2, 4), dir / "out");
  CHECK(validate(manifest).clean());

  std::map<std::string, std::string> source_split;
  for (const auto& [split, entries] : manifest.splits) {
    for (const auto& entry : entries) {
      if (!entry.source) continue;
      const auto key = std::filesystem::path(*entry.source).stem().string();
      auto [it, inserted] = source_split.emplace(key, split);
      CHECK((inserted || it->second == split));
    }
  }
}

TEST_CASE("randomized satisfiable specs always validate cleanly") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 12; ++trial) {
    testsupport::TempDir dir("prop");
    std::uniform_int_distribution<int> pool_size(6, 20), take(0, 2);
    const int n_real = pool_size(rng), n_aug = pool_size(rng);
    const auto real = make_pool(dir / "real", "r", n_real, Domain::kNightReal);
    const auto aug = make_pool(dir / "aug", "a", n_aug, Domain::kNightTransferred);
    MixSpec spec;
    spec.seed = rng();
    int real_left = n_real, aug_left = n_aug;
    for (const auto& name : split_names()) {
      const int r = std::min(real_left, take(rng));
      const int a = std::min(aug_left, take(rng));
      real_left -= r;
      aug_left -= a;
      spec.splits[name] = SplitSpec{r, a, {}, {}, {}};
    }
    const auto manifest = assemble(real, aug, spec, dir / "out");
    const auto report = validate(manifest);
    for (const auto& v : report.violations) {
      CAPTURE(v.type);
      CAPTURE(v.detail);
    }
    CHECK(report.clean());
  }
}

TEST_CASE("validate reports missing files and split overlap") {
  testsupport::TempDir dir("viol");
  const auto real = make_pool(dir / "real", "r", 6, Domain::kNightReal);
  const auto aug = make_pool(dir / "aug", "a", 6, Domain::kNightTransferred);
  auto manifest =
      assemble(real, aug, counts_spec(5, 2, 2, 1, 1, 1, 1), dir / "out");

  std::filesystem::remove(manifest.resolve(manifest.split("train")->at(0).label));
  auto report = validate(manifest);
  REQUIRE(report.violations.size() >= 1);
  CHECK(report.violations[0].type == "missing_file");

  // inject the same image into a second split
  auto tampered = load_manifest(dir / "out" / "manifest.json");
  auto* val_entries = const_cast<std::vector<ManifestEntry>*>(tampered.split("val"));
  val_entries->push_back(tampered.split("train")->at(1));
  bool overlap_found = false, leak_found = false;
  for (const auto& v : validate(tampered).violations) {
    if (v.type == "split_overlap") overlap_found = true;
    if (v.type == "leakage") leak_found = true;
  }
  CHECK(overlap_found);
  CHECK(leak_found);
}

TEST_CASE("empty spec produces an empty manifest; stats mark empty splits") {
  testsupport::TempDir dir("empty");
  const auto manifest = assemble({}, {}, MixSpec{}, dir / "out");
  CHECK(manifest.total_images() == 0);
  const auto stats = composition_stats(manifest);
  CHECK(!stats.per_split.at("train").real_ratio.has_value());
  CHECK(!stats.overall.real_ratio.has_value());
  CHECK(validate(manifest).clean());

  // an all-real split reports ratio 1.0
  testsupport::TempDir dir2("allreal");
  const auto real = make_pool(dir2 / "real", "r", 3, Domain::kNightReal);
  const auto m2 = assemble(real, {}, counts_spec(1, 3, 0, 0, 0, 0, 0), dir2 / "out");
  CHECK(composition_stats(m2).per_split.at("train").real_ratio.value() == 1.0);
}

TEST_CASE("manifest file round trip preserves split order and provenance") {
  testsupport::TempDir dir("roundtrip");
  const auto real = make_pool(dir / "real", "r", 4, Domain::kNightReal);
  const auto aug = make_pool(dir / "aug", "a", 4, Domain::kNightTransferred);
  assemble(real, aug, counts_spec(11, 2, 2, 1, 1, 1, 1), dir / "out");
  const auto loaded = load_manifest(dir / "out" / "manifest.json");
  CHECK(loaded.splits[0].first == "train");
  CHECK(loaded.splits[1].first == "val");
  CHECK(loaded.splits[2].first == "test");
  CHECK(loaded.classes == std::vector<std::string>{"Sedan", "SVP_BV"});
  bool any_source = false;
  for (const auto& e : *loaded.split("train")) {
    if (e.source) any_source = true;
  }
  CHECK(any_source);
}
