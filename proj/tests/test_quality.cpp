#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prds/error.hpp"
#include "prds/quality.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace prds;

TEST_CASE("required pair count of the running example is 12") {
  CHECK(required_pair_count(testing::t1()) == 12);
}

TEST_CASE("required pair count is zero without conflicts to separate") {
  const auto single = testing::make_table({"a", "d"}, {2, 1}, {{0, 0}, {1, 0}});
  CHECK(required_pair_count(single) == 0);
}

TEST_CASE("required pair count equals the brute-force scan") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const auto table = testing::random_table(rng, 30, 4, 3, 3);
    const auto brute = testing::brute_pair_counts(table, {});
    CHECK(required_pair_count(table) == brute.required);
  }
}

TEST_CASE("exact quality on the running example") {
  const auto table = testing::t1();
  const std::uint32_t a[] = {0};
  const std::uint32_t b[] = {1};
  const std::uint32_t ab[] = {0, 1};

  CHECK(quality_exact(table, a).value == doctest::Approx(2.0 / 3.0));
  CHECK(quality_exact(table, b).value == doctest::Approx(2.0 / 3.0));
  CHECK(quality_exact(table, ab).value == 1.0);
  CHECK(quality_exact(table, {}).value == 0.0);

  const auto counts = pair_counts(table, a);
  CHECK(counts.required == 12);
  CHECK(counts.discernible == 8);
}

TEST_CASE("exact quality is undefined on an empty pair universe") {
  const auto single = testing::make_table({"a", "d"}, {2, 1}, {{0, 0}, {1, 0}});
  CHECK_THROWS_AS(quality_exact(single, std::vector<std::uint32_t>{0}), UndefinedMeasureError);
}

TEST_CASE("exact quality rejects non-condition attributes") {
  const auto table = testing::t1();
  const std::uint32_t dec[] = {2};
  CHECK_THROWS_AS(pair_counts(table, dec), ConfigError);
}

TEST_CASE("exact quality equals the brute-force pair scan") {
  Rng rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    const auto table = testing::random_table(rng, 30, 5, 3, 3);
    const auto conds = table.schema().condition_indices();
    std::vector<std::uint32_t> subset;
    for (auto a : conds) {
      if (rng.below(2)) subset.push_back(a);
    }
    const auto brute = testing::brute_pair_counts(table, subset);
    const auto counts = pair_counts(table, subset);
    CHECK(counts.required == brute.required);
    CHECK(counts.discernible == brute.discernible);
  }
}

TEST_CASE("quality is monotone under subset growth") {
  Rng rng(808);
  for (int trial = 0; trial < 30; ++trial) {
    const auto table = testing::random_table(rng, 35, 5, 3, 2);
    if (required_pair_count(table) == 0) continue;
    const auto conds = table.schema().condition_indices();
    std::vector<std::uint32_t> small, large;
    for (auto a : conds) {
      const auto coin = rng.below(3);
      if (coin == 0) small.push_back(a);
      if (coin <= 1) large.push_back(a);
    }
    for (auto a : small) {
      if (std::find(large.begin(), large.end(), a) == large.end()) large.push_back(a);
    }
    const auto q_small = quality_exact(table, small).value;
    const auto q_large = quality_exact(table, large).value;
    const auto q_full = quality_exact(table, conds).value;
    CHECK(q_small <= q_large + 1e-15);
    CHECK(q_large <= q_full + 1e-15);
    CHECK(q_full == 1.0);
  }
}

TEST_CASE("sampling the whole universe reproduces the exact value") {
  const auto table = testing::t1();
  const auto part = partition_by(table, table.schema().condition_indices());
  const auto reg = label_regions(table, part);
  const std::uint32_t a[] = {0};
  const auto sampled = quality_sampled(table, part, reg, a, 6, 9);
  CHECK(sampled.value == doctest::Approx(2.0 / 3.0));
  CHECK(sampled.mode == QualityMode::kSampled);
  CHECK(sampled.sample_size == 6);

  Rng rng(21);
  const auto big = testing::random_table(rng, 80, 4, 3, 3);
  const auto part_big = partition_by(big, big.schema().condition_indices());
  const auto reg_big = label_regions(big, part_big);
  const std::uint32_t subset[] = {0, 2};
  if (required_pair_count(part_big, reg_big) > 0) {
    const auto exact = quality_exact(big, part_big, reg_big, subset);
    const auto full_sample = quality_sampled(big, part_big, reg_big, subset, 80, 3);
    CHECK(full_sample.value == doctest::Approx(exact.value));
  }
}

TEST_CASE("sampled quality concentrates around the exact value") {
  testing::StructuredSpec spec;
  spec.rows = 50000;
  spec.positive_classes = 150;
  spec.boundary_classes = 300;
  spec.seed = 5;
  const auto synth = testing::make_structured(spec);
  const auto& table = synth.table;
  const auto part = partition_by(table, table.schema().condition_indices());
  const auto reg = label_regions(table, part);

  const std::uint32_t subset[] = {0, 1, 2, 3, 4, 5, 6, 7};
  const double exact = quality_exact(table, part, reg, subset).value;
  double mean = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    mean += quality_sampled(table, part, reg, subset, 10000, 100 + s).value;
  }
  mean /= seeds;
  CHECK(std::abs(mean - exact) < 0.01);
}

TEST_CASE("sampled quality is undefined when nothing must be distinguished") {
  const auto single = testing::make_table({"a", "d"}, {2, 1}, {{0, 0}, {1, 0}, {0, 0}});
  const auto part = partition_by(single, single.schema().condition_indices());
  const auto reg = label_regions(single, part);
  const std::uint32_t a[] = {0};
  CHECK_THROWS_AS(quality_sampled(single, part, reg, a, 3, 1), UndefinedMeasureError);
}

TEST_CASE("alpha-reduct predicate") {
  const auto table = testing::t1();
  const std::uint32_t a[] = {0};
  const std::uint32_t ab[] = {0, 1};
  CHECK(is_alpha_reduct(table, a, 0.6));
  CHECK_FALSE(is_alpha_reduct(table, a, 0.7));
  CHECK(is_alpha_reduct(table, ab, 1.0));
  CHECK_THROWS_AS(is_alpha_reduct(table, a, 0.0), ConfigError);
}
