#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "prds/error.hpp"
#include "prds/rng.hpp"
#include "prds/table.hpp"

namespace prds::testing {

// Generator spec for a structured inconsistent table with known
// positive/boundary class counts and positive-object ratio.
struct StructuredSpec {
  std::uint64_t rows = 20000;
  std::uint32_t attributes = 20;   // trailing (attributes - informative) copy leading ones
  std::uint32_t informative = 16;
  std::uint32_t decisions = 4;
  std::uint32_t positive_classes = 120;
  std::uint32_t boundary_classes = 500;
  // Of the boundary classes, this many are enlarged "anchor" classes of the
  // given size; they conflict early in a sampling run.
  std::uint32_t boundary_anchor_classes = 0;
  std::uint64_t boundary_anchor_size = 0;
  double positive_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct StructuredTable {
  DecisionTable table;
  std::uint64_t nop = 0;
  std::uint64_t nob = 0;
  double rop = 0.0;
};

// Builds the table class by class: each class gets a distinct condition tuple;
// positive classes are decision-pure, boundary classes alternate two decision
// values so any two draws from one conflict.
inline StructuredTable make_structured(const StructuredSpec& spec) {
  Rng rng(spec.seed);
  const std::uint32_t total_classes = spec.positive_classes + spec.boundary_classes;

  std::vector<std::uint32_t> cards(spec.attributes);
  for (std::uint32_t a = 0; a < spec.attributes; ++a) {
    cards[a] = a < spec.informative ? 2 + (a % 4) : cards[a - spec.informative];
  }

  // Distinct tuples over the informative attributes; trailing attributes are
  // copies so duplicated columns exercise attribute removal.
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::vector<std::uint32_t>> tuples;
  tuples.reserve(total_classes);
  while (tuples.size() < total_classes) {
    std::vector<std::uint32_t> tuple(spec.attributes);
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t a = 0; a < spec.informative; ++a) {
      tuple[a] = static_cast<std::uint32_t>(rng.below(cards[a]));
      h ^= tuple[a];
      h *= 1099511628211ull;
    }
    for (std::uint32_t a = spec.informative; a < spec.attributes; ++a) {
      tuple[a] = tuple[a - spec.informative];
    }
    if (seen.insert(h).second) tuples.push_back(std::move(tuple));
  }

  const auto pos_total = static_cast<std::uint64_t>(
      static_cast<double>(spec.rows) * spec.positive_fraction + 0.5);
  const std::uint64_t bnd_total = spec.rows - pos_total;
  const std::uint64_t anchor_total =
      static_cast<std::uint64_t>(spec.boundary_anchor_classes) * spec.boundary_anchor_size;
  if (spec.boundary_anchor_classes > spec.boundary_classes || anchor_total + 2 > bnd_total) {
    throw ConfigError("boundary anchors exceed the boundary object budget");
  }
  const std::uint32_t regular_bnd = spec.boundary_classes - spec.boundary_anchor_classes;
  if (pos_total < spec.positive_classes || bnd_total - anchor_total < 2 * regular_bnd) {
    throw ConfigError("structured spec leaves too few objects per class");
  }

  // Near-equal sizes with mild jitter; boundary classes need at least 2.
  auto sizes = [&](std::uint32_t classes, std::uint64_t total,
                   std::uint64_t min_size) {
    std::vector<std::uint64_t> out(classes, min_size);
    std::uint64_t rest = total - min_size * classes;
    for (std::uint32_t c = 0; c < classes; ++c) {
      const std::uint64_t share = rest / (classes - c);
      const std::uint64_t jitter = share > 2 ? rng.below(share / 2 + 1) : 0;
      const std::uint64_t take = std::min(rest, share + jitter);
      out[c] += take;
      rest -= take;
    }
    out[classes - 1] += rest;
    return out;
  };
  const auto pos_sizes = sizes(spec.positive_classes, pos_total, 1);
  std::vector<std::uint64_t> bnd_sizes(spec.boundary_anchor_classes, spec.boundary_anchor_size);
  if (regular_bnd > 0) {
    const auto rest = sizes(regular_bnd, bnd_total - anchor_total, 2);
    bnd_sizes.insert(bnd_sizes.end(), rest.begin(), rest.end());
  }

  Schema schema;
  for (std::uint32_t a = 0; a < spec.attributes; ++a) {
    const auto idx = schema.add_attribute("a" + std::to_string(a), AttrKind::kCategorical);
    for (std::uint32_t v = 0; v < cards[a]; ++v) schema.intern(idx, std::to_string(v));
  }
  const auto dec_idx = schema.add_attribute("d", AttrKind::kCategorical);
  for (std::uint32_t v = 0; v < spec.decisions; ++v) schema.intern(dec_idx, std::to_string(v));
  schema.set_decision(dec_idx);

  const std::size_t width = spec.attributes + 1;
  std::vector<std::uint32_t> codes;
  codes.reserve(spec.rows * width);
  auto emit_row = [&](const std::vector<std::uint32_t>& tuple, std::uint32_t decision) {
    codes.insert(codes.end(), tuple.begin(), tuple.end());
    codes.push_back(decision);
  };

  for (std::uint32_t c = 0; c < spec.positive_classes; ++c) {
    const std::uint32_t dec = c % spec.decisions;  // every decision value appears
    for (std::uint64_t i = 0; i < pos_sizes[c]; ++i) emit_row(tuples[c], dec);
  }
  for (std::uint32_t c = 0; c < spec.boundary_classes; ++c) {
    const auto& tuple = tuples[spec.positive_classes + c];
    const auto d1 = static_cast<std::uint32_t>(rng.below(spec.decisions));
    const auto d2 =
        static_cast<std::uint32_t>((d1 + 1 + rng.below(spec.decisions - 1)) % spec.decisions);
    // Strict alternation: two equally sized decision halves per class.
    for (std::uint64_t i = 0; i < bnd_sizes[c]; ++i) {
      emit_row(tuple, i % 2 == 0 ? d1 : d2);
    }
  }

  StructuredTable out{DecisionTable(std::move(schema), spec.rows, std::move(codes)),
                      spec.positive_classes, spec.boundary_classes,
                      static_cast<double>(pos_total) / static_cast<double>(spec.rows)};
  return out;
}

}  // namespace prds::testing
