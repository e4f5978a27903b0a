#include "prds/reduct.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "prds/error.hpp"

namespace prds {

PosTable::PosTable(const DecisionTable& table, std::uint64_t attr_seed, AttrStrategy strategy)
    : table_(&table),
      conditions_(table.schema().condition_indices()),
      attr_rng_(attr_seed),
      strategy_(strategy) {
  in_candidate_.assign(table.schema().attribute_count(), 0);
  decision_seen_.assign(table.schema().decision_value_count(), 0);
}

std::uint64_t PosTable::hash_conditions(std::uint64_t row) const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t a : conditions_) {
    h ^= table_->code(row, a);
    h *= 1099511628211ull;
  }
  return h;
}

bool PosTable::same_conditions(std::uint64_t row_a, std::uint64_t row_b) const {
  for (std::uint32_t a : conditions_) {
    if (table_->code(row_a, a) != table_->code(row_b, a)) return false;
  }
  return true;
}

bool PosTable::separates(std::uint32_t attr, std::uint32_t cls_a, std::uint32_t cls_b) const {
  return table_->code(classes_[cls_a].representative, attr) !=
         table_->code(classes_[cls_b].representative, attr);
}

bool PosTable::pair_separated(const ClassPair& pair, std::span<const std::uint32_t> attrs) const {
  for (std::uint32_t a : attrs) {
    if (separates(a, pair.first, pair.second)) return true;
  }
  return false;
}

PosTable::AbsorbResult PosTable::absorb(std::uint64_t row) {
  ++drawn_;
  const std::uint32_t dec = table_->decision(row);
  if (!decision_seen_[dec]) {
    decision_seen_[dec] = 1;
    ++distinct_decisions_;
  }

  AbsorbResult result;
  const std::uint64_t h = hash_conditions(row);
  auto& bucket = class_index_[h];
  std::uint32_t cls = std::numeric_limits<std::uint32_t>::max();
  for (std::uint32_t c : bucket) {
    if (same_conditions(classes_[c].representative, row)) {
      cls = c;
      break;
    }
  }

  if (cls != std::numeric_limits<std::uint32_t>::max()) {
    ClassInfo& info = classes_[cls];
    ++info.size;
    result.class_id = cls;
    if (info.decision == kBoundary) {
      result.draw_case = DrawCase::kBoundaryMember;
    } else if (info.decision == static_cast<std::int32_t>(dec)) {
      result.draw_case = DrawCase::kPositiveMember;
    } else {
      // The class moves to the boundary: it no longer needs separating from
      // other boundary classes, but now needs separating from the positive
      // classes of its former decision value.
      result.draw_case = DrawCase::kFlip;
      result.former_decision = info.decision;
      info.decision = kBoundary;
      --positive_classes_;
      for (std::uint32_t c = 0; c < classes_.size(); ++c) {
        if (c != cls && classes_[c].decision == result.former_decision) {
          result.pending.emplace_back(cls, c);
        }
      }
    }
    return result;
  }

  // New singleton class; decision-pure, so it starts positive and must be
  // separable from boundary classes and positive classes of other decisions.
  const auto new_cls = static_cast<std::uint32_t>(classes_.size());
  classes_.push_back(ClassInfo{static_cast<std::uint32_t>(row), 1,
                               static_cast<std::int32_t>(dec)});
  bucket.push_back(new_cls);
  ++positive_classes_;
  result.draw_case = DrawCase::kNewClass;
  result.class_id = new_cls;
  for (std::uint32_t c = 0; c < new_cls; ++c) {
    const std::int32_t other = classes_[c].decision;
    if (other == kBoundary || other != static_cast<std::int32_t>(dec)) {
      result.pending.emplace_back(new_cls, c);
    }
  }
  return result;
}

std::vector<std::uint32_t> PosTable::new_attributes_needed(std::span<const ClassPair> pending) {
  std::vector<std::uint32_t> added;
  std::vector<std::uint32_t> separating;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (pair_separated(pending[i], candidate_)) continue;
    separating.clear();
    for (std::uint32_t a : conditions_) {
      if (!in_candidate_[a] && separates(a, pending[i].first, pending[i].second)) {
        separating.push_back(a);
      }
    }
    if (separating.empty()) {
      throw Error("internal invariant violated: a class pair is inseparable by all attributes");
    }
    std::uint32_t chosen;
    if (strategy_ == AttrStrategy::kRandom) {
      chosen = separating[attr_rng_.below(separating.size())];
    } else {
      // Max-cover: among the attributes separating this pair, prefer the one
      // separating the most still-unseparated pending pairs.
      chosen = separating.front();
      std::size_t best_cover = 0;
      for (std::uint32_t a : separating) {
        std::size_t cover = 0;
        for (std::size_t j = i; j < pending.size(); ++j) {
          if (!pair_separated(pending[j], candidate_) &&
              separates(a, pending[j].first, pending[j].second)) {
            ++cover;
          }
        }
        if (cover > best_cover) {
          best_cover = cover;
          chosen = a;
        }
      }
    }
    candidate_.insert(std::upper_bound(candidate_.begin(), candidate_.end(), chosen), chosen);
    in_candidate_[chosen] = 1;
    added.push_back(chosen);
  }
  std::sort(added.begin(), added.end());
  return added;
}

bool PosTable::covers(std::span<const std::uint32_t> attrs) const {
  // Group classes by their projection onto `attrs`; the pairs inside one
  // group are exactly the pairs `attrs` cannot separate. Coverage fails as
  // soon as a group mixes decisions among positive classes, or mixes
  // positive with boundary classes.
  struct Group {
    std::int32_t positive_decision = -2;  // -2: none yet
    bool has_boundary = false;
  };
  // hash -> (representative class, group)
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, Group>>> buckets;
  buckets.reserve(classes_.size());

  for (std::uint32_t c = 0; c < classes_.size(); ++c) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t a : attrs) {
      h ^= table_->code(classes_[c].representative, a);
      h *= 1099511628211ull;
    }
    auto& bucket = buckets[h];
    Group* group = nullptr;
    for (auto& [rep, g] : bucket) {
      bool same = true;
      for (std::uint32_t a : attrs) {
        if (table_->code(classes_[rep].representative, a) !=
            table_->code(classes_[c].representative, a)) {
          same = false;
          break;
        }
      }
      if (same) {
        group = &g;
        break;
      }
    }
    if (group == nullptr) {
      bucket.emplace_back(c, Group{});
      group = &bucket.back().second;
    }
    const std::int32_t dec = classes_[c].decision;
    if (dec == kBoundary) {
      if (group->positive_decision != -2) return false;
      group->has_boundary = true;
    } else {
      if (group->has_boundary) return false;
      if (group->positive_decision == -2) {
        group->positive_decision = dec;
      } else if (group->positive_decision != dec) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::uint32_t> PosTable::need_remove_attr() {
  std::vector<std::uint32_t> removed;
  std::vector<std::uint32_t> trial;
  for (std::size_t i = 0; i < candidate_.size();) {
    trial = candidate_;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (covers(trial)) {
      in_candidate_[candidate_[i]] = 0;
      removed.push_back(candidate_[i]);
      candidate_ = std::move(trial);
    } else {
      ++i;
    }
  }
  return removed;
}

void PosTable::replace_candidate(std::vector<std::uint32_t> attrs) {
  std::sort(attrs.begin(), attrs.end());
  std::fill(in_candidate_.begin(), in_candidate_.end(), 0);
  for (std::uint32_t a : attrs) in_candidate_[a] = 1;
  candidate_ = std::move(attrs);
}

bool PosTable::trivial() const {
  return positive_classes_ == 0 || distinct_decisions_ <= 1;
}

ReductResult find_reduct(const DecisionTable& table, const ReductConfig& config) {
  if (table.row_count() == 0) throw EmptyUniverseError("cannot search an empty table");
  if (!table.fully_categorical()) {
    throw ConfigError("table has undiscretized continuous attributes");
  }
  if (config.run_length < 1) throw ConfigError("run length must be positive");
  if (config.tolerance < 0.0 || config.tolerance > 0.05) {
    throw ConfigError("tolerance must lie in [0, 0.05]");
  }

  ReductResult result;
  result.expected_bound =
      config.run_length >= 50 ? quality_lower_bound(config.run_length, config.confidence) : 0.0;

  PosTable state(table, mix_seed(config.seed, 1), config.strategy);
  DrawSequence draws(table, mix_seed(config.seed, 2));
  RunLengthTest run(config.run_length, result.expected_bound);
  std::uint64_t window_flips = 0;
  // Tiny slack so an exact integer threshold is not missed to rounding.
  const double flip_threshold =
      static_cast<double>(config.run_length) * config.tolerance - 1e-9;

  while (true) {
    if (run.streak() >= config.run_length) {
      result.terminal = Terminal::kRunComplete;
      break;
    }
    auto row = draws.next();
    if (!row) {
      result.terminal = Terminal::kExhaustedUniverse;
      break;
    }

    auto absorbed = state.absorb(*row);
    result.case_trace.push_back(static_cast<std::uint8_t>(absorbed.draw_case));

    bool event = false;
    std::vector<std::uint32_t> added;
    std::vector<std::uint32_t> removed;
    if (absorbed.draw_case == PosTable::DrawCase::kNewClass) {
      added = state.new_attributes_needed(absorbed.pending);
      event = !added.empty();
    } else if (absorbed.draw_case == PosTable::DrawCase::kFlip) {
      ++window_flips;
      added = state.new_attributes_needed(absorbed.pending);
      removed = state.need_remove_attr();
      event = !added.empty() || !removed.empty() ||
              static_cast<double>(window_flips) >= flip_threshold;
    }

    if (run.step(!event) == RunVerdict::kReject) {
      run.reset();
      window_flips = 0;
      ++result.resets;
    }

    if (event || !added.empty() || !removed.empty()) {
      DrawEvent ev;
      ev.draw = draws.drawn();
      ev.draw_case = static_cast<std::uint8_t>(absorbed.draw_case);
      ev.added = added;
      ev.removed = removed;
      ev.reset = event;
      result.events.push_back(std::move(ev));
    }

    if (config.verify_invariants && !state.covers(state.candidate())) {
      throw Error("coverage invariant violated after draw " + std::to_string(draws.drawn()));
    }
  }

  result.attributes = state.candidate();
  result.draws = draws.drawn();
  result.trivial = state.trivial();
  result.guarantee = result.terminal == Terminal::kRunComplete && config.run_length >= 50;
  result.final_streak = run.streak();
  result.final_window_flips = window_flips;
  return result;
}

std::vector<std::uint32_t> greedy_reduct(const DecisionTable& table) {
  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  const std::uint64_t required = required_pair_count(part, reg);
  if (required == 0) {
    throw UndefinedMeasureError("no object pairs must be distinguished in this table");
  }

  std::vector<std::uint32_t> selected;
  std::vector<std::uint8_t> used(table.schema().attribute_count(), 0);
  std::uint64_t covered = 0;
  std::vector<std::uint32_t> trial;
  while (covered < required) {
    std::uint32_t best_attr = 0;
    std::uint64_t best_covered = covered;
    bool improved = false;
    for (std::uint32_t a : conds) {
      if (used[a]) continue;
      trial = selected;
      trial.push_back(a);
      const auto counts = pair_counts(table, part, reg, trial);
      if (counts.discernible > best_covered) {
        best_covered = counts.discernible;
        best_attr = a;
        improved = true;
      }
    }
    if (!improved) break;  // cannot happen: the full set separates everything
    selected.push_back(best_attr);
    used[best_attr] = 1;
    covered = best_covered;
  }
  std::sort(selected.begin(), selected.end());

  // Backward elimination of attributes that no longer contribute.
  for (std::size_t i = 0; i < selected.size();) {
    std::vector<std::uint32_t> without = selected;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    const auto counts = pair_counts(table, part, reg, without);
    if (counts.discernible == required) {
      selected = std::move(without);
    } else {
      ++i;
    }
  }
  return selected;
}

std::vector<std::vector<std::uint32_t>> all_minimal_reducts(const DecisionTable& table,
                                                            std::uint32_t max_attributes) {
  const auto conds = table.schema().condition_indices();
  if (conds.size() > max_attributes || conds.size() > 20) {
    throw ConfigError("exhaustive reduct enumeration is limited to " +
                      std::to_string(std::min<std::uint32_t>(max_attributes, 20)) +
                      " condition attributes; use find_reduct or greedy_reduct instead");
  }
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);
  const std::uint64_t required = required_pair_count(part, reg);
  if (required == 0) {
    throw UndefinedMeasureError("no object pairs must be distinguished in this table");
  }

  const std::uint32_t m = static_cast<std::uint32_t>(conds.size());
  std::vector<std::uint8_t> full(1u << m, 0);  // mask -> separates everything
  std::vector<std::uint32_t> attrs;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    attrs.clear();
    for (std::uint32_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) attrs.push_back(conds[i]);
    }
    full[mask] = pair_counts(table, part, reg, attrs).discernible == required ? 1 : 0;
  }

  // A reduct separates everything while no single-attribute removal does.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> found;  // (popcount, mask)
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (!full[mask]) continue;
    bool minimal = true;
    for (std::uint32_t i = 0; i < m && minimal; ++i) {
      if ((mask & (1u << i)) && full[mask & ~(1u << i)]) minimal = false;
    }
    if (minimal) found.emplace_back(std::popcount(mask), mask);
  }
  std::sort(found.begin(), found.end());

  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& [count, mask] : found) {
    std::vector<std::uint32_t> reduct;
    for (std::uint32_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) reduct.push_back(conds[i]);
    }
    out.push_back(std::move(reduct));
  }
  return out;
}

}  // namespace prds
