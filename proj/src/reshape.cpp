#include "prds/reshape.hpp"

#include <algorithm>
#include <numeric>

#include "prds/error.hpp"
#include "prds/regions.hpp"
#include "prds/rng.hpp"

namespace prds {

const char* reshape_strategy_name(ReshapeStrategy strategy) {
  switch (strategy) {
    case ReshapeStrategy::kTenTimes: return "ten-times";
    case ReshapeStrategy::kHalfBorder: return "half-border";
    case ReshapeStrategy::kHalfPos: return "half-pos";
    case ReshapeStrategy::kMinimalPos: return "minimal-pos";
    case ReshapeStrategy::kMinimalBorder: return "minimal-border";
  }
  return "?";
}

ReshapeStrategy parse_reshape_strategy(const std::string& name) {
  if (name == "ten-times") return ReshapeStrategy::kTenTimes;
  if (name == "half-border") return ReshapeStrategy::kHalfBorder;
  if (name == "half-pos") return ReshapeStrategy::kHalfPos;
  if (name == "minimal-pos") return ReshapeStrategy::kMinimalPos;
  if (name == "minimal-border") return ReshapeStrategy::kMinimalBorder;
  throw ConfigError("unknown reshape strategy: " + name);
}

namespace {

DecisionTable from_rows(const DecisionTable& table, const std::vector<std::uint32_t>& rows) {
  const std::size_t attr_count = table.schema().attribute_count();
  std::vector<std::uint32_t> codes;
  codes.reserve(rows.size() * attr_count);
  for (std::uint32_t r : rows) {
    const auto row = table.row(r);
    codes.insert(codes.end(), row.begin(), row.end());
  }
  return DecisionTable(table.schema(), rows.size(), std::move(codes));
}

// Classes split by region, with the classes to drop chosen at random.
struct RegionClasses {
  std::vector<std::uint32_t> positive;
  std::vector<std::uint32_t> boundary;
};

RegionClasses split_classes(const Partition& part, const RegionIndex& reg) {
  RegionClasses rc;
  for (std::uint32_t c = 0; c < part.classes.size(); ++c) {
    (reg.positive(c) ? rc.positive : rc.boundary).push_back(c);
  }
  return rc;
}

void shuffle(std::vector<std::uint32_t>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.below(i)]);
  }
}

// Drops every class in `dropped`, refilling the freed slots with rows drawn
// uniformly from `pool` (duplicates allowed, so no new classes appear).
std::vector<std::uint32_t> drop_and_refill(const DecisionTable& table, const Partition& part,
                                           const std::vector<std::uint32_t>& dropped,
                                           const std::vector<std::uint32_t>& pool, Rng& rng) {
  std::vector<std::uint8_t> is_dropped(part.classes.size(), 0);
  for (std::uint32_t c : dropped) is_dropped[c] = 1;

  std::vector<std::uint32_t> rows;
  rows.reserve(table.row_count());
  std::uint64_t freed = 0;
  for (std::uint64_t r = 0; r < table.row_count(); ++r) {
    if (is_dropped[part.row_class[r]]) {
      ++freed;
    } else {
      rows.push_back(static_cast<std::uint32_t>(r));
    }
  }
  for (std::uint64_t i = 0; i < freed; ++i) {
    rows.push_back(pool[rng.below(pool.size())]);
  }
  return rows;
}

std::vector<std::uint32_t> member_rows(const Partition& part,
                                       const std::vector<std::uint32_t>& classes) {
  std::vector<std::uint32_t> rows;
  for (std::uint32_t c : classes) {
    rows.insert(rows.end(), part.classes[c].begin(), part.classes[c].end());
  }
  return rows;
}

}  // namespace

DecisionTable reshape(const DecisionTable& table, ReshapeStrategy strategy, std::uint64_t seed) {
  if (!table.fully_categorical()) {
    throw ConfigError("reshape requires a fully categorical table");
  }
  if (strategy == ReshapeStrategy::kTenTimes) {
    std::vector<std::uint32_t> rows;
    rows.reserve(table.row_count() * 10);
    for (std::uint64_t r = 0; r < table.row_count(); ++r) {
      for (int copy = 0; copy < 10; ++copy) rows.push_back(static_cast<std::uint32_t>(r));
    }
    return from_rows(table, rows);
  }

  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  auto rc = split_classes(part, reg);
  Rng rng(seed);

  switch (strategy) {
    case ReshapeStrategy::kHalfBorder: {
      if (rc.boundary.size() < 2) {
        throw StrategyError("half-border needs at least 2 boundary classes");
      }
      shuffle(rc.boundary, rng);
      const std::size_t keep = rc.boundary.size() / 2;
      std::vector<std::uint32_t> dropped(rc.boundary.begin() + keep, rc.boundary.end());
      std::vector<std::uint32_t> kept(rc.boundary.begin(), rc.boundary.begin() + keep);
      return from_rows(table, drop_and_refill(table, part, dropped, member_rows(part, kept), rng));
    }
    case ReshapeStrategy::kHalfPos: {
      if (rc.positive.size() < 2) {
        throw StrategyError("half-pos needs at least 2 positive-region classes");
      }
      shuffle(rc.positive, rng);
      const std::size_t keep = rc.positive.size() / 2;
      std::vector<std::uint32_t> dropped(rc.positive.begin() + keep, rc.positive.end());
      std::vector<std::uint32_t> kept(rc.positive.begin(), rc.positive.begin() + keep);
      return from_rows(table, drop_and_refill(table, part, dropped, member_rows(part, kept), rng));
    }
    case ReshapeStrategy::kMinimalPos: {
      if (rc.positive.empty()) {
        throw StrategyError("minimal-pos needs a non-empty positive region");
      }
      std::vector<std::uint32_t> rows;
      rows.reserve(table.row_count());
      std::vector<std::uint8_t> kept_one(part.classes.size(), 0);
      std::uint64_t freed = 0;
      for (std::uint64_t r = 0; r < table.row_count(); ++r) {
        const std::uint32_t cls = part.row_class[r];
        if (reg.positive(cls) && kept_one[cls]) {
          ++freed;
        } else {
          kept_one[cls] = 1;
          rows.push_back(static_cast<std::uint32_t>(r));
        }
      }
      if (freed > 0) {
        const auto pool = member_rows(part, rc.boundary);
        if (pool.empty()) {
          throw StrategyError("minimal-pos needs boundary objects to refill freed slots");
        }
        for (std::uint64_t i = 0; i < freed; ++i) rows.push_back(pool[rng.below(pool.size())]);
      }
      return from_rows(table, rows);
    }
    case ReshapeStrategy::kMinimalBorder: {
      if (rc.boundary.empty()) {
        throw StrategyError("minimal-border needs a non-empty boundary region");
      }
      // Keep one instance per decision value per boundary class, so every
      // class stays on the boundary with minimal size.
      std::vector<std::uint32_t> rows;
      rows.reserve(table.row_count());
      const std::uint32_t decisions = table.schema().decision_value_count();
      std::vector<std::uint8_t> seen(part.classes.size() * decisions, 0);
      std::uint64_t freed = 0;
      for (std::uint64_t r = 0; r < table.row_count(); ++r) {
        const std::uint32_t cls = part.row_class[r];
        if (reg.positive(cls)) {
          rows.push_back(static_cast<std::uint32_t>(r));
          continue;
        }
        auto flag = seen.begin() + static_cast<std::ptrdiff_t>(
                                       static_cast<std::uint64_t>(cls) * decisions +
                                       table.decision(r));
        if (*flag) {
          ++freed;
        } else {
          *flag = 1;
          rows.push_back(static_cast<std::uint32_t>(r));
        }
      }
      if (freed > 0) {
        const auto pool = member_rows(part, rc.positive);
        if (pool.empty()) {
          throw StrategyError("minimal-border needs positive objects to refill freed slots");
        }
        for (std::uint64_t i = 0; i < freed; ++i) rows.push_back(pool[rng.below(pool.size())]);
      }
      return from_rows(table, rows);
    }
    default:
      throw ConfigError("unhandled reshape strategy");
  }
}

}  // namespace prds
