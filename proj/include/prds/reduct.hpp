#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prds/confidence.hpp"
#include "prds/quality.hpp"
#include "prds/rng.hpp"
#include "prds/table.hpp"

namespace prds {

enum class AttrStrategy : std::uint8_t { kRandom, kMaxCover };

struct ReductConfig {
  // Consecutive clean draws required before the candidate is accepted.
  std::uint64_t run_length = 150;
  // Flip-tolerance threshold: fraction of the run length for which positive
  // classes may move to the boundary without forcing a restart. Capped at
  // 0.05; irrelevant for consistent tables (no class can ever flip).
  double tolerance = 0.0;
  ConfidenceParams confidence{};
  std::uint64_t seed = 0;
  AttrStrategy strategy = AttrStrategy::kRandom;
  // Re-verify the coverage invariant after every draw (slow; for debugging).
  bool verify_invariants = false;
};

enum class Terminal : std::uint8_t { kRunComplete, kExhaustedUniverse };

using ClassPair = std::pair<std::uint32_t, std::uint32_t>;

// The growing sampled sub-table: equivalence classes of drawn rows under the
// full condition set, their region labels, and the candidate attribute set
// that separates every must-distinguish class pair seen so far.
class PosTable {
 public:
  static constexpr std::int32_t kBoundary = -1;

  struct ClassInfo {
    std::uint32_t representative = 0;  // row index in the source table
    std::uint32_t size = 0;
    std::int32_t decision = kBoundary;  // >= 0: positive with this decision
  };

  enum class DrawCase : std::uint8_t {
    kPositiveMember = 1,  // joins a positive class, decision matches
    kBoundaryMember = 2,  // joins a boundary class
    kNewClass = 3,
    kFlip = 4,  // turns a positive class into a boundary class
  };

  struct AbsorbResult {
    DrawCase draw_case = DrawCase::kNewClass;
    std::uint32_t class_id = 0;
    std::int32_t former_decision = kBoundary;  // flips only
    std::vector<ClassPair> pending;            // new must-distinguish pairs
  };

  PosTable(const DecisionTable& table, std::uint64_t attr_seed, AttrStrategy strategy);

  // Adds one row, classifying the draw and returning the class pairs whose
  // separation must now be checked: a new class against every class it must
  // be distinguished from; a flipped class against the positive classes of
  // its former decision value.
  AbsorbResult absorb(std::uint64_t row);

  // Extends the candidate until every pending pair is separated; returns the
  // attributes added. Random strategy picks uniformly among the attributes
  // separating a pair; max-cover picks the one separating the most remaining
  // pairs (ties to the lowest index).
  std::vector<std::uint32_t> new_attributes_needed(std::span<const ClassPair> pending);

  // Drops every candidate attribute without which all current
  // must-distinguish pairs stay separated; greedy in ascending index order,
  // re-checking after each removal. Returns the attributes removed.
  std::vector<std::uint32_t> need_remove_attr();

  // True iff every must-distinguish class pair is separated by `attrs`.
  bool covers(std::span<const std::uint32_t> attrs) const;

  const std::vector<std::uint32_t>& candidate() const { return candidate_; }
  void replace_candidate(std::vector<std::uint32_t> attrs);

  const std::vector<ClassInfo>& classes() const { return classes_; }
  std::uint64_t drawn_rows() const { return drawn_; }
  std::uint64_t positive_classes() const { return positive_classes_; }

  // Trivial sub-table: empty positive region, or a single decision value.
  bool trivial() const;

 private:
  bool separates(std::uint32_t attr, std::uint32_t cls_a, std::uint32_t cls_b) const;
  bool pair_separated(const ClassPair& pair, std::span<const std::uint32_t> attrs) const;
  std::uint64_t hash_conditions(std::uint64_t row) const;
  bool same_conditions(std::uint64_t row_a, std::uint64_t row_b) const;

  const DecisionTable* table_;
  std::vector<std::uint32_t> conditions_;
  std::vector<ClassInfo> classes_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> class_index_;
  std::vector<std::uint32_t> candidate_;  // sorted
  std::vector<std::uint8_t> in_candidate_;
  Rng attr_rng_;
  AttrStrategy strategy_;
  std::uint64_t drawn_ = 0;
  std::uint64_t positive_classes_ = 0;
  std::vector<std::uint8_t> decision_seen_;
  std::uint32_t distinct_decisions_ = 0;
};

struct DrawEvent {
  std::uint64_t draw = 0;  // 1-based draw number
  std::uint8_t draw_case = 0;
  std::vector<std::uint32_t> added;
  std::vector<std::uint32_t> removed;
  bool reset = false;
};

struct ReductResult {
  std::vector<std::uint32_t> attributes;  // sorted
  std::uint64_t draws = 0;
  Terminal terminal = Terminal::kRunComplete;
  bool trivial = false;
  // True when the accepting run finished, so the confidence bound applies.
  bool guarantee = false;
  double expected_bound = 0.0;
  std::uint64_t resets = 0;
  std::uint64_t final_streak = 0;
  std::uint64_t final_window_flips = 0;
  std::vector<std::uint8_t> case_trace;  // per draw, values 1..4
  std::vector<DrawEvent> events;         // structural events only
  std::optional<QualityEstimate> quality;
};

// Incremental approximate-reduct search: draw rows without replacement into a
// positive-region-preserving sample, repair the candidate on each structural
// event, and stop after `run_length` consecutive draws without an event (or
// when the universe is exhausted).
ReductResult find_reduct(const DecisionTable& table, const ReductConfig& config);

// Forward greedy selection by newly separated pair count, then backward
// elimination; always reaches quality 1.
std::vector<std::uint32_t> greedy_reduct(const DecisionTable& table);

// Exhaustive enumeration of all minimal attribute subsets with quality 1.
// Guarded to at most `max_attributes` condition attributes.
std::vector<std::vector<std::uint32_t>> all_minimal_reducts(const DecisionTable& table,
                                                            std::uint32_t max_attributes = 20);

}  // namespace prds
