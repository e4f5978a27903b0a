#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prds/table.hpp"

namespace prds {

// Per-attribute cut thresholds; k cuts induce k+1 bins. Bins are half-open
// [low, high): a value equal to a cut falls in the upper bin.
struct CutSet {
  std::vector<std::pair<std::string, std::vector<double>>> entries;

  const std::vector<double>* find(std::string_view attribute) const;
  void set(std::string attribute, std::vector<double> cuts);
};

// Shannon entropy in bits of a class-count vector.
double class_entropy(std::span<const std::uint64_t> counts);

// Recursive entropy-minimizing cuts for one attribute, accepted under the
// minimum-description-length stopping criterion. Candidate thresholds are
// midpoints between adjacent distinct values at class boundaries.
std::vector<double> mdlp_fit(std::span<const double> values,
                             std::span<const std::uint32_t> labels);

// Fits cuts for every continuous attribute of the table.
CutSet fit_cuts(const DecisionTable& table);

// Replaces every continuous value by its bin code; the result is fully
// categorical. Every continuous attribute must have an entry in `cuts`.
DecisionTable apply_cuts(const DecisionTable& table, const CutSet& cuts);

// Text sidecar: one "attribute_name: t1,t2,..." line per attribute.
void save_cuts(const CutSet& cuts, const std::string& path);
CutSet load_cuts(const std::string& path);

}  // namespace prds
