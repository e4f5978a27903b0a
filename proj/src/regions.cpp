#include "prds/regions.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "prds/error.hpp"

namespace prds {

namespace {

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

}  // namespace

Partition partition_by(const DecisionTable& table, std::span<const std::uint32_t> attrs) {
  const auto& schema = table.schema();
  if (table.row_count() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("partitioning limited to 2^32-1 rows");
  }
  Partition part;
  part.attributes.assign(attrs.begin(), attrs.end());
  std::sort(part.attributes.begin(), part.attributes.end());
  part.attributes.erase(std::unique(part.attributes.begin(), part.attributes.end()),
                        part.attributes.end());
  for (std::uint32_t a : part.attributes) {
    if (a >= schema.attribute_count()) {
      throw ConfigError("attribute index out of range: " + std::to_string(a));
    }
    if (a == schema.decision_index()) {
      throw ConfigError("decision attribute cannot appear in a condition subset");
    }
    if (schema.kind(a) == AttrKind::kContinuous) {
      throw ConfigError("attribute not discretized: " + schema.attribute_name(a));
    }
  }

  const std::uint64_t n = table.row_count();
  part.row_class.resize(n);
  // Hash buckets hold candidate class ids; equality is confirmed against a
  // representative row on collision.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  buckets.reserve(n / 2 + 8);
  for (std::uint64_t r = 0; r < n; ++r) {
    const std::uint64_t h = hash_projection(table, r, part.attributes);
    auto& candidates = buckets[h];
    std::uint32_t cls = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t c : candidates) {
      if (same_projection(table, part.classes[c].front(), r, part.attributes)) {
        cls = c;
        break;
      }
    }
    if (cls == std::numeric_limits<std::uint32_t>::max()) {
      cls = static_cast<std::uint32_t>(part.classes.size());
      part.classes.emplace_back();
      candidates.push_back(cls);
    }
    part.classes[cls].push_back(static_cast<std::uint32_t>(r));
    part.row_class[r] = cls;
  }
  return part;
}

RegionIndex label_regions(const DecisionTable& table, const Partition& part) {
  RegionIndex reg;
  reg.class_decision.resize(part.classes.size());
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    const auto& members = part.classes[c];
    const std::uint32_t first = table.decision(members.front());
    bool pure = true;
    for (std::uint32_t r : members) {
      if (table.decision(r) != first) {
        pure = false;
        break;
      }
    }
    if (pure) {
      reg.class_decision[c] = static_cast<std::int32_t>(first);
      reg.positive_objects += members.size();
    } else {
      reg.class_decision[c] = RegionIndex::kBoundary;
    }
  }
  return reg;
}

std::vector<std::uint32_t> positive_rows(const Partition& part, const RegionIndex& reg) {
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    if (reg.positive(static_cast<std::uint32_t>(c))) {
      out.insert(out.end(), part.classes[c].begin(), part.classes[c].end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> boundary_rows(const Partition& part, const RegionIndex& reg) {
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    if (!reg.positive(static_cast<std::uint32_t>(c))) {
      out.insert(out.end(), part.classes[c].begin(), part.classes[c].end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> lower_approximation(const Partition& part, const RegionIndex& reg,
                                               std::uint32_t decision) {
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    if (reg.class_decision[c] == static_cast<std::int32_t>(decision)) {
      out.insert(out.end(), part.classes[c].begin(), part.classes[c].end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> upper_approximation(const DecisionTable& table, const Partition& part,
                                               const RegionIndex& reg, std::uint32_t decision) {
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    const auto& members = part.classes[c];
    if (reg.class_decision[c] == static_cast<std::int32_t>(decision)) {
      out.insert(out.end(), members.begin(), members.end());
    } else if (!reg.positive(static_cast<std::uint32_t>(c))) {
      const bool touches = std::any_of(members.begin(), members.end(), [&](std::uint32_t r) {
        return table.decision(r) == decision;
      });
      if (touches) out.insert(out.end(), members.begin(), members.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_consistent(const DecisionTable& table) {
  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  return reg.positive_objects == table.row_count();
}

StructureStats structure_stats(const DecisionTable& table, const Partition& part,
                               const RegionIndex& reg) {
  StructureStats stats;
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    if (reg.positive(static_cast<std::uint32_t>(c))) {
      ++stats.nop;
    } else {
      ++stats.nob;
    }
  }
  stats.rop = table.row_count() == 0
                  ? 0.0
                  : static_cast<double>(reg.positive_objects) /
                        static_cast<double>(table.row_count());
  return stats;
}

StructureStats structure_stats(const DecisionTable& table) {
  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  return structure_stats(table, part, reg);
}

}  // namespace prds
