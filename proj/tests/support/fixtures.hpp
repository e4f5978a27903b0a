#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prds/rng.hpp"
#include "prds/table.hpp"

namespace prds::testing {

// Builds a categorical table directly from code rows. Dictionary entries are
// "0".."card-1" per attribute; the last attribute is the decision.
inline DecisionTable make_table(const std::vector<std::string>& names,
                                const std::vector<std::uint32_t>& cardinalities,
                                const std::vector<std::vector<std::uint32_t>>& rows) {
  Schema schema;
  for (std::size_t a = 0; a < names.size(); ++a) {
    const auto idx = schema.add_attribute(names[a], AttrKind::kCategorical);
    for (std::uint32_t v = 0; v < cardinalities[a]; ++v) {
      schema.intern(idx, std::to_string(v));
    }
  }
  schema.set_decision(static_cast<std::uint32_t>(names.size() - 1));
  std::vector<std::uint32_t> codes;
  codes.reserve(rows.size() * names.size());
  for (const auto& row : rows) {
    codes.insert(codes.end(), row.begin(), row.end());
  }
  return DecisionTable(std::move(schema), rows.size(), std::move(codes));
}

// The 6-object running example: conditions a, b and decision d.
// Classes under {a,b}: {0,1} pure, {2} pure, {3,4} mixed, {5} pure.
inline DecisionTable t1() {
  Schema schema;
  for (const char* name : {"a", "b"}) {
    const auto idx = schema.add_attribute(name, AttrKind::kCategorical);
    schema.intern(idx, "0");
    schema.intern(idx, "1");
  }
  const auto d = schema.add_attribute("d", AttrKind::kCategorical);
  schema.intern(d, "Y");
  schema.intern(d, "N");
  schema.set_decision(d);
  std::vector<std::uint32_t> codes = {
      0, 0, 0,  // o1: Y
      0, 0, 0,  // o2: Y
      0, 1, 1,  // o3: N
      1, 0, 0,  // o4: Y
      1, 0, 1,  // o5: N
      1, 1, 1,  // o6: N
  };
  return DecisionTable(std::move(schema), 6, std::move(codes));
}

inline const char* t1_csv() {
  return "a,b,d\n0,0,Y\n0,0,Y\n0,1,N\n1,0,Y\n1,0,N\n1,1,N\n";
}

// Random categorical table with the given shape; decision is the last column.
inline DecisionTable random_table(Rng& rng, std::uint32_t rows, std::uint32_t attrs,
                                  std::uint32_t max_card, std::uint32_t decisions) {
  std::vector<std::string> names;
  std::vector<std::uint32_t> cards;
  for (std::uint32_t a = 0; a < attrs; ++a) {
    names.push_back("c" + std::to_string(a));
    cards.push_back(2 + static_cast<std::uint32_t>(rng.below(max_card - 1)));
  }
  names.push_back("d");
  cards.push_back(decisions);
  std::vector<std::vector<std::uint32_t>> data(rows);
  for (auto& row : data) {
    row.resize(attrs + 1);
    for (std::uint32_t a = 0; a < attrs; ++a) {
      row[a] = static_cast<std::uint32_t>(rng.below(cards[a]));
    }
    row[attrs] = static_cast<std::uint32_t>(rng.below(decisions));
  }
  return make_table(names, cards, data);
}

}  // namespace prds::testing
