#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "prds/error.hpp"
#include "prds/regions.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace prds;

namespace {

std::set<std::set<std::uint32_t>> class_sets(const Partition& part) {
  std::set<std::set<std::uint32_t>> out;
  for (const auto& cls : part.classes) {
    out.emplace(cls.begin(), cls.end());
  }
  return out;
}

DecisionTable t1_without_o5() {
  return testing::make_table({"a", "b", "d"}, {2, 2, 2},
                             {{0, 0, 0}, {0, 0, 0}, {0, 1, 1}, {1, 0, 0}, {1, 1, 1}});
}

}  // namespace

TEST_CASE("partition groups rows by projection") {
  const auto table = testing::t1();

  const std::uint32_t ab[] = {0, 1};
  const auto part_ab = partition_by(table, ab);
  CHECK(class_sets(part_ab) ==
        std::set<std::set<std::uint32_t>>{{0, 1}, {2}, {3, 4}, {5}});

  const std::uint32_t a[] = {0};
  const auto part_a = partition_by(table, a);
  CHECK(class_sets(part_a) == std::set<std::set<std::uint32_t>>{{0, 1, 2}, {3, 4, 5}});

  const auto part_empty = partition_by(table, {});
  CHECK(part_empty.classes.size() == 1);
  CHECK(part_empty.classes[0].size() == 6);
}

TEST_CASE("partition validates the attribute subset") {
  const auto table = testing::t1();
  const std::uint32_t bad[] = {9};
  CHECK_THROWS_AS(partition_by(table, bad), ConfigError);
  const std::uint32_t dec[] = {2};
  CHECK_THROWS_AS(partition_by(table, dec), ConfigError);
}

TEST_CASE("regions of the running example") {
  const auto table = testing::t1();
  const std::uint32_t ab[] = {0, 1};
  const auto part = partition_by(table, ab);
  const auto reg = label_regions(table, part);

  CHECK(positive_rows(part, reg) == std::vector<std::uint32_t>{0, 1, 2, 5});
  CHECK(boundary_rows(part, reg) == std::vector<std::uint32_t>{3, 4});
  CHECK(reg.positive_objects == 4);
}

TEST_CASE("lower and upper approximations") {
  const auto table = testing::t1();
  const auto part = partition_by(table, table.schema().condition_indices());
  const auto reg = label_regions(table, part);

  // Decision code 0 is "Y": lower = {o1,o2}, upper adds the mixed class {o4,o5}.
  CHECK(lower_approximation(part, reg, 0) == std::vector<std::uint32_t>{0, 1});
  CHECK(upper_approximation(table, part, reg, 0) == std::vector<std::uint32_t>{0, 1, 3, 4});
  CHECK(lower_approximation(part, reg, 1) == std::vector<std::uint32_t>{2, 5});
  CHECK(upper_approximation(table, part, reg, 1) == std::vector<std::uint32_t>{2, 3, 4, 5});
}

TEST_CASE("fully inconsistent table has an empty positive region") {
  const auto table = testing::make_table({"a", "d"}, {1, 2},
                                         {{0, 0}, {0, 1}, {0, 0}, {0, 1}});
  const auto part = partition_by(table, table.schema().condition_indices());
  const auto reg = label_regions(table, part);
  CHECK(reg.positive_objects == 0);
  CHECK(positive_rows(part, reg).empty());
}

TEST_CASE("consistency check") {
  CHECK_FALSE(is_consistent(testing::t1()));
  CHECK(is_consistent(t1_without_o5()));
  CHECK(is_consistent(testing::make_table({"a", "d"}, {2, 2}, {{0, 1}})));
}

TEST_CASE("structure stats of the running example") {
  const auto stats = structure_stats(testing::t1());
  CHECK(stats.nop == 3);
  CHECK(stats.nob == 1);
  CHECK(stats.rop == doctest::Approx(4.0 / 6.0));

  const auto consistent = structure_stats(t1_without_o5());
  CHECK(consistent.nob == 0);
  CHECK(consistent.rop == 1.0);
}

TEST_CASE("structure stats match the generator ground truth") {
  testing::StructuredSpec spec;
  spec.rows = 4000;
  spec.positive_classes = 50;
  spec.boundary_classes = 80;
  spec.positive_fraction = 0.75;
  spec.seed = 11;
  const auto synth = testing::make_structured(spec);
  const auto stats = structure_stats(synth.table);
  CHECK(stats.nop == synth.nop);
  CHECK(stats.nob == synth.nob);
  CHECK(stats.rop == doctest::Approx(synth.rop));
}

TEST_CASE("refinement and positive-region monotonicity") {
  Rng rng(314);
  for (int trial = 0; trial < 30; ++trial) {
    const auto table = testing::random_table(rng, 40, 5, 3, 3);
    const auto conds = table.schema().condition_indices();

    // Random chain R ⊂ R'.
    std::vector<std::uint32_t> small, large;
    for (auto a : conds) {
      const auto coin = rng.below(3);
      if (coin == 0) small.push_back(a);
      if (coin <= 1) large.push_back(a);
    }
    for (auto a : small) {
      if (std::find(large.begin(), large.end(), a) == large.end()) large.push_back(a);
    }

    const auto part_small = partition_by(table, small);
    const auto part_large = partition_by(table, large);

    // Every class of the finer partition sits inside one class of the coarser.
    for (const auto& cls : part_large.classes) {
      const auto host = part_small.row_class[cls.front()];
      for (auto r : cls) CHECK(part_small.row_class[r] == host);
    }

    const auto pos_small = positive_rows(part_small, label_regions(table, part_small));
    const auto pos_large = positive_rows(part_large, label_regions(table, part_large));
    CHECK(std::includes(pos_large.begin(), pos_large.end(), pos_small.begin(), pos_small.end()));
  }
}

TEST_CASE("positive classes are exactly the decision-pure classes") {
  Rng rng(77);
  const auto table = testing::random_table(rng, 60, 4, 3, 3);
  const auto part = partition_by(table, table.schema().condition_indices());
  const auto reg = label_regions(table, part);
  for (std::uint32_t c = 0; c < part.classes.size(); ++c) {
    bool pure = true;
    for (auto r : part.classes[c]) {
      pure = pure && table.decision(r) == table.decision(part.classes[c].front());
    }
    CHECK(reg.positive(c) == pure);
  }
}
