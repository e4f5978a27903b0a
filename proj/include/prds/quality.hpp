#pragma once

#include <cstdint>
#include <span>

#include "prds/regions.hpp"
#include "prds/table.hpp"

namespace prds {

// Object-pair counts over the pairs that must be distinguished: two positive
// rows with different decisions, or a positive row against a boundary row.
struct PairCounts {
  std::uint64_t required = 0;     // all must-distinguish pairs
  std::uint64_t discernible = 0;  // those separated by the attribute subset
};

enum class QualityMode : std::uint8_t { kExact, kSampled };

struct QualityEstimate {
  double value = 0.0;
  QualityMode mode = QualityMode::kExact;
  std::uint64_t sample_size = 0;  // 0 for exact
};

// Count of all must-distinguish pairs under the full condition set.
std::uint64_t required_pair_count(const DecisionTable& table);
std::uint64_t required_pair_count(const Partition& part, const RegionIndex& reg);

PairCounts pair_counts(const DecisionTable& table, std::span<const std::uint32_t> attrs);
PairCounts pair_counts(const DecisionTable& table, const Partition& part, const RegionIndex& reg,
                       std::span<const std::uint32_t> attrs);

// Fraction of must-distinguish pairs separated by the attribute subset.
QualityEstimate quality_exact(const DecisionTable& table, std::span<const std::uint32_t> attrs);
QualityEstimate quality_exact(const DecisionTable& table, const Partition& part,
                              const RegionIndex& reg, std::span<const std::uint32_t> attrs);

// Same measure restricted to pairs among `sample_size` rows drawn without
// replacement; each sampled row keeps its region label from the full table.
QualityEstimate quality_sampled(const DecisionTable& table, const Partition& part,
                                const RegionIndex& reg, std::span<const std::uint32_t> attrs,
                                std::uint64_t sample_size, std::uint64_t seed);

bool is_alpha_reduct(const DecisionTable& table, std::span<const std::uint32_t> attrs,
                     double alpha);

}  // namespace prds
