#include "prds/quality.hpp"

#include <algorithm>
#include <unordered_map>

#include "prds/error.hpp"

namespace prds {

namespace {

// Object counts of one projection group, split by region and decision.
struct GroupTally {
  std::unordered_map<std::int32_t, std::uint64_t> positive_by_decision;
  std::uint64_t positive = 0;
  std::uint64_t boundary = 0;

  void add(std::int32_t class_decision, std::uint64_t count) {
    if (class_decision == RegionIndex::kBoundary) {
      boundary += count;
    } else {
      positive += count;
      positive_by_decision[class_decision] += count;
    }
  }

  // Pairs that must be distinguished inside this group: positive objects with
  // different decisions, and positive against boundary objects.
  std::uint64_t required_pairs() const {
    std::uint64_t same = 0;
    for (const auto& [dec, count] : positive_by_decision) same += count * count;
    return (positive * positive - same) / 2 + positive * boundary;
  }
};

void check_condition_subset(const DecisionTable& table, std::span<const std::uint32_t> attrs) {
  const auto& schema = table.schema();
  for (std::uint32_t a : attrs) {
    if (a >= schema.attribute_count() || a == schema.decision_index()) {
      throw ConfigError("attribute subset must contain condition attributes only");
    }
  }
}

std::uint64_t hash_projection(const DecisionTable& table, std::uint64_t row,
                              std::span<const std::uint32_t> attrs) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t a : attrs) {
    h ^= table.code(row, a);
    h *= 1099511628211ull;
  }
  return h;
}

bool same_projection(const DecisionTable& table, std::uint64_t row_a, std::uint64_t row_b,
                     std::span<const std::uint32_t> attrs) {
  for (std::uint32_t a : attrs) {
    if (table.code(row_a, a) != table.code(row_b, a)) return false;
  }
  return true;
}

// Groups (representative row, class decision, count) items by their
// projection onto `attrs` and sums required pairs within each group. Items in
// one group are mutually indiscernible by `attrs`.
struct ProjectionGrouper {
  const DecisionTable& table;
  std::span<const std::uint32_t> attrs;
  // hash -> list of (representative row, tally index)
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> buckets;
  std::vector<GroupTally> tallies;

  ProjectionGrouper(const DecisionTable& t, std::span<const std::uint32_t> a) : table(t), attrs(a) {}

  void add(std::uint32_t representative, std::int32_t class_decision, std::uint64_t count) {
    const std::uint64_t h = hash_projection(table, representative, attrs);
    auto& bucket = buckets[h];
    for (auto& [rep, idx] : bucket) {
      if (same_projection(table, rep, representative, attrs)) {
        tallies[idx].add(class_decision, count);
        return;
      }
    }
    bucket.emplace_back(representative, static_cast<std::uint32_t>(tallies.size()));
    tallies.emplace_back();
    tallies.back().add(class_decision, count);
  }

  std::uint64_t required_pairs() const {
    std::uint64_t total = 0;
    for (const auto& t : tallies) total += t.required_pairs();
    return total;
  }
};

}  // namespace

std::uint64_t required_pair_count(const Partition& part, const RegionIndex& reg) {
  GroupTally all;
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    all.add(reg.class_decision[c], part.classes[c].size());
  }
  return all.required_pairs();
}

std::uint64_t required_pair_count(const DecisionTable& table) {
  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  return required_pair_count(part, reg);
}

PairCounts pair_counts(const DecisionTable& table, const Partition& part, const RegionIndex& reg,
                       std::span<const std::uint32_t> attrs) {
  check_condition_subset(table, attrs);
  PairCounts counts;
  counts.required = required_pair_count(part, reg);

  ProjectionGrouper grouper(table, attrs);
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    grouper.add(part.classes[c].front(), reg.class_decision[c], part.classes[c].size());
  }
  const std::uint64_t indiscernible = grouper.required_pairs();
  counts.discernible = counts.required - indiscernible;
  return counts;
}

PairCounts pair_counts(const DecisionTable& table, std::span<const std::uint32_t> attrs) {
  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  return pair_counts(table, part, reg, attrs);
}

QualityEstimate quality_exact(const DecisionTable& table, const Partition& part,
                              const RegionIndex& reg, std::span<const std::uint32_t> attrs) {
  const auto counts = pair_counts(table, part, reg, attrs);
  if (counts.required == 0) {
    throw UndefinedMeasureError("no object pairs must be distinguished in this table");
  }
  QualityEstimate est;
  est.value = static_cast<double>(counts.discernible) / static_cast<double>(counts.required);
  est.mode = QualityMode::kExact;
  return est;
}

QualityEstimate quality_exact(const DecisionTable& table, std::span<const std::uint32_t> attrs) {
  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  return quality_exact(table, part, reg, attrs);
}

QualityEstimate quality_sampled(const DecisionTable& table, const Partition& part,
                                const RegionIndex& reg, std::span<const std::uint32_t> attrs,
                                std::uint64_t sample_size, std::uint64_t seed) {
  check_condition_subset(table, attrs);
  if (sample_size < 2) throw ConfigError("sample size must be at least 2");
  sample_size = std::min<std::uint64_t>(sample_size, table.row_count());

  DrawSequence seq(table.row_count(), seed);
  GroupTally all;
  ProjectionGrouper grouper(table, attrs);
  for (std::uint64_t i = 0; i < sample_size; ++i) {
    const std::uint64_t row = *seq.next();
    const std::int32_t label = reg.class_decision[part.row_class[row]];
    all.add(label, 1);
    grouper.add(static_cast<std::uint32_t>(row), label, 1);
  }

  const std::uint64_t required = all.required_pairs();
  if (required == 0) {
    throw UndefinedMeasureError("sample contains no pair that must be distinguished");
  }
  const std::uint64_t indiscernible = grouper.required_pairs();
  QualityEstimate est;
  est.value = static_cast<double>(required - indiscernible) / static_cast<double>(required);
  est.mode = QualityMode::kSampled;
  est.sample_size = sample_size;
  return est;
}

bool is_alpha_reduct(const DecisionTable& table, std::span<const std::uint32_t> attrs,
                     double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
  return quality_exact(table, attrs).value >= alpha;
}

}  // namespace prds
