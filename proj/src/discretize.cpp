#include "prds/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "prds/error.hpp"

namespace prds {

const std::vector<double>* CutSet::find(std::string_view attribute) const {
  for (const auto& [name, cuts] : entries) {
    if (name == attribute) return &cuts;
  }
  return nullptr;
}

void CutSet::set(std::string attribute, std::vector<double> cuts) {
  for (auto& [name, existing] : entries) {
    if (name == attribute) {
      existing = std::move(cuts);
      return;
    }
  }
  entries.emplace_back(std::move(attribute), std::move(cuts));
}

double class_entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  double ent = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / static_cast<double>(total);
    ent -= q * std::log2(q);
  }
  return ent;
}

namespace {

struct SortedColumn {
  std::vector<double> values;
  std::vector<std::uint32_t> labels;
  std::uint32_t label_count = 0;
};

std::uint32_t distinct_labels(std::span<const std::uint64_t> counts) {
  std::uint32_t k = 0;
  for (auto c : counts) {
    if (c > 0) ++k;
  }
  return k;
}

// log2(3^k - 2), computed without overflowing for large class counts.
double log2_pow3_minus2(std::uint32_t k) {
  return k * std::log2(3.0) + std::log2(1.0 - 2.0 * std::pow(3.0, -static_cast<double>(k)));
}

void recurse(const SortedColumn& col, std::size_t lo, std::size_t hi, std::vector<double>& cuts) {
  const std::size_t n = hi - lo;
  if (n < 2) return;

  std::vector<std::uint64_t> parent(col.label_count, 0);
  for (std::size_t i = lo; i < hi; ++i) ++parent[col.labels[i]];
  const std::uint32_t k = distinct_labels(parent);
  if (k <= 1) return;
  const double parent_entropy = class_entropy(parent);

  // Runs of equal value, with label purity per run.
  struct Block {
    std::size_t end;
    bool pure;
    std::uint32_t label;
  };
  std::vector<Block> blocks;
  for (std::size_t i = lo; i < hi;) {
    std::size_t j = i;
    bool pure = true;
    while (j < hi && col.values[j] == col.values[i]) {
      if (col.labels[j] != col.labels[i]) pure = false;
      ++j;
    }
    blocks.push_back({j, pure, col.labels[i]});
    i = j;
  }
  if (blocks.size() < 2) return;

  // Candidate splits lie between adjacent blocks, skipped when both blocks
  // are pure with the same label (no class boundary there).
  std::vector<std::uint64_t> left(col.label_count, 0);
  std::vector<std::uint64_t> right = parent;
  double best_weighted = 0.0;
  std::size_t best_split = 0;
  bool found = false;
  std::size_t pos = lo;
  for (std::size_t bi = 0; bi + 1 < blocks.size(); ++bi) {
    for (; pos < blocks[bi].end; ++pos) {
      ++left[col.labels[pos]];
      --right[col.labels[pos]];
    }
    const Block& prev = blocks[bi];
    const Block& next = blocks[bi + 1];
    if (prev.pure && next.pure && prev.label == next.label) continue;
    const double wl = static_cast<double>(pos - lo) / static_cast<double>(n);
    const double weighted = wl * class_entropy(left) + (1.0 - wl) * class_entropy(right);
    if (!found || weighted < best_weighted) {
      found = true;
      best_weighted = weighted;
      best_split = pos;
    }
  }
  if (!found) return;

  std::fill(left.begin(), left.end(), 0);
  for (std::size_t i = lo; i < best_split; ++i) ++left[col.labels[i]];
  std::vector<std::uint64_t> rest(col.label_count, 0);
  for (std::size_t i = best_split; i < hi; ++i) ++rest[col.labels[i]];

  const double left_entropy = class_entropy(left);
  const double right_entropy = class_entropy(rest);
  const double wl = static_cast<double>(best_split - lo) / static_cast<double>(n);
  const double gain = parent_entropy - (wl * left_entropy + (1.0 - wl) * right_entropy);

  const std::uint32_t k1 = distinct_labels(left);
  const std::uint32_t k2 = distinct_labels(rest);
  const double delta = log2_pow3_minus2(k) - (k * parent_entropy - k1 * left_entropy -
                                              k2 * right_entropy);
  const double threshold =
      (std::log2(static_cast<double>(n - 1)) + delta) / static_cast<double>(n);
  if (gain <= threshold) return;

  cuts.push_back((col.values[best_split - 1] + col.values[best_split]) / 2.0);
  recurse(col, lo, best_split, cuts);
  recurse(col, best_split, hi, cuts);
}

}  // namespace

std::vector<double> mdlp_fit(std::span<const double> values,
                             std::span<const std::uint32_t> labels) {
  if (values.size() != labels.size()) {
    throw ConfigError("values and labels must have equal length");
  }
  if (values.empty()) return {};

  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });

  SortedColumn col;
  col.values.reserve(values.size());
  col.labels.reserve(values.size());
  for (auto i : order) {
    col.values.push_back(values[i]);
    col.labels.push_back(labels[i]);
  }
  col.label_count = *std::max_element(col.labels.begin(), col.labels.end()) + 1;

  std::vector<double> cuts;
  recurse(col, 0, col.values.size(), cuts);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

CutSet fit_cuts(const DecisionTable& table) {
  const auto& schema = table.schema();
  CutSet cuts;
  std::vector<std::uint32_t> labels(table.row_count());
  for (std::uint64_t r = 0; r < table.row_count(); ++r) labels[r] = table.decision(r);
  for (std::uint32_t a = 0; a < schema.attribute_count(); ++a) {
    if (schema.kind(a) != AttrKind::kContinuous) continue;
    std::vector<double> values(table.row_count());
    for (std::uint64_t r = 0; r < table.row_count(); ++r) values[r] = table.raw_value(r, a);
    cuts.set(schema.attribute_name(a), mdlp_fit(values, labels));
  }
  return cuts;
}

namespace {

std::string format_threshold(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  return buf;
}

std::string bin_label(const std::vector<double>& cuts, std::size_t bin) {
  std::string low = bin == 0 ? "-inf" : format_threshold(cuts[bin - 1]);
  std::string high = bin == cuts.size() ? "+inf" : format_threshold(cuts[bin]);
  return "[" + low + "," + high + ")";
}

}  // namespace

DecisionTable apply_cuts(const DecisionTable& table, const CutSet& cuts) {
  const auto& schema = table.schema();
  Schema out_schema;
  for (std::uint32_t a = 0; a < schema.attribute_count(); ++a) {
    out_schema.add_attribute(schema.attribute_name(a), AttrKind::kCategorical);
    if (schema.kind(a) == AttrKind::kContinuous) {
      const auto* attr_cuts = cuts.find(schema.attribute_name(a));
      if (attr_cuts == nullptr) {
        throw ConfigError("no cuts provided for continuous attribute " +
                          schema.attribute_name(a));
      }
      for (std::size_t bin = 0; bin <= attr_cuts->size(); ++bin) {
        out_schema.intern(a, bin_label(*attr_cuts, bin));
      }
    } else {
      for (const auto& value : schema.dictionary(a)) out_schema.intern(a, value);
    }
  }
  out_schema.set_decision(schema.decision_index());

  const std::size_t attr_count = schema.attribute_count();
  std::vector<std::uint32_t> codes(table.cells());
  for (std::uint32_t a = 0; a < attr_count; ++a) {
    if (schema.kind(a) != AttrKind::kContinuous) continue;
    const auto& attr_cuts = *cuts.find(schema.attribute_name(a));
    for (std::uint64_t r = 0; r < table.row_count(); ++r) {
      const double v = table.raw_value(r, a);
      // A value equal to a cut belongs to the upper bin.
      const auto bin = std::upper_bound(attr_cuts.begin(), attr_cuts.end(), v) -
                       attr_cuts.begin();
      codes[r * attr_count + a] = static_cast<std::uint32_t>(bin);
    }
  }
  return DecisionTable(std::move(out_schema), table.row_count(), std::move(codes));
}

void save_cuts(const CutSet& cuts, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open cut file for writing: " + path);
  for (const auto& [name, thresholds] : cuts.entries) {
    out << name << ':';
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      out << (i == 0 ? " " : ",") << format_threshold(thresholds[i]);
    }
    out << '\n';
  }
}

CutSet load_cuts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cut file: " + path);
  CutSet cuts;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'attribute: cuts'");
    }
    std::string name = line.substr(0, colon);
    std::vector<double> thresholds;
    std::stringstream rest(line.substr(colon + 1));
    std::string token;
    while (std::getline(rest, token, ',')) {
      if (token.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        thresholds.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad threshold '" + token + "'");
      }
    }
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
      throw ParseError("line " + std::to_string(line_no) + ": thresholds must be increasing");
    }
    cuts.set(std::move(name), std::move(thresholds));
  }
  return cuts;
}

}  // namespace prds
