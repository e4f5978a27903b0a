#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "prds/rng.hpp"

namespace prds {

enum class AttrKind : std::uint8_t { kCategorical = 0, kContinuous = 1 };

// Attribute layout plus per-attribute value dictionaries (text <-> dense code).
// Exactly one attribute is the decision attribute.
class Schema {
 public:
  std::uint32_t add_attribute(std::string name, AttrKind kind);
  void set_decision(std::uint32_t index);

  // Interns a value, assigning the next dense code on first appearance.
  std::uint32_t intern(std::uint32_t attr, std::string_view value);

  std::size_t attribute_count() const { return attrs_.size(); }
  std::uint32_t decision_index() const { return decision_; }
  const std::string& attribute_name(std::uint32_t attr) const { return attrs_[attr].name; }
  AttrKind kind(std::uint32_t attr) const { return attrs_[attr].kind; }
  void set_kind(std::uint32_t attr, AttrKind kind) { attrs_[attr].kind = kind; }

  std::uint32_t dictionary_size(std::uint32_t attr) const {
    return static_cast<std::uint32_t>(attrs_[attr].values.size());
  }
  const std::vector<std::string>& dictionary(std::uint32_t attr) const {
    return attrs_[attr].values;
  }
  const std::string& decode(std::uint32_t attr, std::uint32_t code) const {
    return attrs_[attr].values[code];
  }
  std::optional<std::uint32_t> find_code(std::uint32_t attr, std::string_view value) const;
  std::optional<std::uint32_t> find_attribute(std::string_view name) const;

  std::uint32_t decision_value_count() const { return dictionary_size(decision_); }

  // All attribute indices except the decision.
  std::vector<std::uint32_t> condition_indices() const;

  bool operator==(const Schema& other) const;

 private:
  struct Attribute {
    std::string name;
    AttrKind kind = AttrKind::kCategorical;
    std::vector<std::string> values;
    std::unordered_map<std::string, std::uint32_t> index;
  };
  std::vector<Attribute> attrs_;
  std::uint32_t decision_ = 0;
};

// Immutable dictionary-encoded row store. Cells are dense integer codes with
// O(1) random row access; continuous attributes keep their raw decimal values
// on the side until discretization replaces them with bin codes.
class DecisionTable {
 public:
  DecisionTable(Schema schema, std::uint64_t rows, std::vector<std::uint32_t> codes,
                std::vector<std::vector<double>> raw = {});

  const Schema& schema() const { return schema_; }
  std::uint64_t row_count() const { return rows_; }

  std::uint32_t code(std::uint64_t row, std::uint32_t attr) const {
    return codes_[row * schema_.attribute_count() + attr];
  }
  std::span<const std::uint32_t> row(std::uint64_t r) const {
    return {codes_.data() + r * schema_.attribute_count(), schema_.attribute_count()};
  }
  std::uint32_t decision(std::uint64_t row) const { return code(row, schema_.decision_index()); }

  // Raw value of a continuous attribute before discretization.
  double raw_value(std::uint64_t row, std::uint32_t attr) const { return raw_[attr][row]; }
  bool has_raw(std::uint32_t attr) const { return attr < raw_.size() && !raw_[attr].empty(); }
  bool fully_categorical() const;

  const std::vector<std::uint32_t>& cells() const { return codes_; }

  bool operator==(const DecisionTable& other) const;

 private:
  Schema schema_;
  std::uint64_t rows_ = 0;
  std::vector<std::uint32_t> codes_;
  std::vector<std::vector<double>> raw_;  // per attribute; empty unless continuous
};

struct IngestOptions {
  char delimiter = ',';
  bool has_header = true;
  // Decision column by name or decimal index; empty selects the last column.
  std::string decision;
  // When non-empty, these columns are concatenated into a single decision
  // attribute and removed from the condition set.
  std::vector<std::string> label_columns;
  // Columns to parse as decimal numbers (discretized later).
  std::vector<std::string> continuous;
};

DecisionTable ingest_delimited(const std::string& path, const IngestOptions& options = {});

void save_store(const DecisionTable& table, const std::string& path);
DecisionTable load_store(const std::string& path);

// Uniform random draw of row indices without replacement; incremental
// Fisher-Yates over an index array, O(1) per draw.
class DrawSequence {
 public:
  DrawSequence(std::uint64_t universe, std::uint64_t seed);
  DrawSequence(const DecisionTable& table, std::uint64_t seed);

  // Next unseen row index, or nullopt once all rows have been drawn.
  std::optional<std::uint64_t> next();

  std::uint64_t drawn() const { return drawn_; }
  std::uint64_t universe() const { return order_.size(); }

 private:
  std::vector<std::uint32_t> order_;
  std::uint64_t drawn_ = 0;
  Rng rng_;
};

}  // namespace prds
