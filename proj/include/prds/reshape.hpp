#pragma once

#include <cstdint>
#include <string>

#include "prds/table.hpp"

namespace prds {

// Structure-reform transforms: change the equivalence-class structure of a
// table while keeping its schema (and, except for kTenTimes, its row count).
enum class ReshapeStrategy : std::uint8_t {
  kTenTimes,       // every row duplicated 10x; structure stats unchanged
  kHalfBorder,     // drop half the boundary classes, refill from the rest
  kHalfPos,        // drop half the positive classes, refill from the rest
  kMinimalPos,     // one instance per positive class, refill from boundary
  kMinimalBorder,  // one instance per decision value per boundary class,
                   // refill from the positive region
};

const char* reshape_strategy_name(ReshapeStrategy strategy);
ReshapeStrategy parse_reshape_strategy(const std::string& name);

DecisionTable reshape(const DecisionTable& table, ReshapeStrategy strategy, std::uint64_t seed);

}  // namespace prds
