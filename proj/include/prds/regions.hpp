#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prds/table.hpp"

namespace prds {

// Equivalence classes of rows under an attribute subset: rows in one class
// agree on every attribute of the subset.
struct Partition {
  std::vector<std::uint32_t> attributes;             // sorted, duplicates removed
  std::vector<std::vector<std::uint32_t>> classes;   // class id -> member rows
  std::vector<std::uint32_t> row_class;              // row -> class id
};

Partition partition_by(const DecisionTable& table, std::span<const std::uint32_t> attrs);

// Positive/boundary labels per equivalence class. A class is positive iff all
// members share one decision code.
struct RegionIndex {
  static constexpr std::int32_t kBoundary = -1;
  std::vector<std::int32_t> class_decision;  // decision code, or kBoundary
  std::uint64_t positive_objects = 0;

  bool positive(std::uint32_t cls) const { return class_decision[cls] != kBoundary; }
};

RegionIndex label_regions(const DecisionTable& table, const Partition& part);

std::vector<std::uint32_t> positive_rows(const Partition& part, const RegionIndex& reg);
std::vector<std::uint32_t> boundary_rows(const Partition& part, const RegionIndex& reg);

// Rows certainly belonging to the decision concept: union of positive classes
// with that decision code.
std::vector<std::uint32_t> lower_approximation(const Partition& part, const RegionIndex& reg,
                                               std::uint32_t decision);
// Rows possibly belonging to the concept: the lower approximation plus every
// boundary class containing at least one member with that decision.
std::vector<std::uint32_t> upper_approximation(const DecisionTable& table, const Partition& part,
                                               const RegionIndex& reg, std::uint32_t decision);

bool is_consistent(const DecisionTable& table);

struct StructureStats {
  std::uint64_t nop = 0;  // positive-region class count
  std::uint64_t nob = 0;  // boundary class count
  double rop = 0.0;       // positive objects / all objects
};

StructureStats structure_stats(const DecisionTable& table);
StructureStats structure_stats(const DecisionTable& table, const Partition& part,
                               const RegionIndex& reg);

}  // namespace prds
