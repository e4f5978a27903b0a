#include "prds/table.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "prds/error.hpp"

namespace prds {

std::uint32_t Schema::add_attribute(std::string name, AttrKind kind) {
  Attribute attr;
  attr.name = std::move(name);
  attr.kind = kind;
  attrs_.push_back(std::move(attr));
  return static_cast<std::uint32_t>(attrs_.size() - 1);
}

void Schema::set_decision(std::uint32_t index) {
  if (index >= attrs_.size()) throw ConfigError("decision index out of range");
  decision_ = index;
}

std::uint32_t Schema::intern(std::uint32_t attr, std::string_view value) {
  auto& a = attrs_[attr];
  auto it = a.index.find(std::string(value));
  if (it != a.index.end()) return it->second;
  const auto code = static_cast<std::uint32_t>(a.values.size());
  a.values.emplace_back(value);
  a.index.emplace(std::string(value), code);
  return code;
}

std::optional<std::uint32_t> Schema::find_code(std::uint32_t attr, std::string_view value) const {
  const auto& a = attrs_[attr];
  auto it = a.index.find(std::string(value));
  if (it == a.index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Schema::find_attribute(std::string_view name) const {
  for (std::uint32_t i = 0; i < attrs_.size(); ++i) {
    if (attrs_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::uint32_t> Schema::condition_indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(attrs_.size() - 1);
  for (std::uint32_t i = 0; i < attrs_.size(); ++i) {
    if (i != decision_) out.push_back(i);
  }
  return out;
}

bool Schema::operator==(const Schema& other) const {
  if (decision_ != other.decision_ || attrs_.size() != other.attrs_.size()) return false;
  for (std::size_t i = 0; i < attrs_.size(); ++i) {
    if (attrs_[i].name != other.attrs_[i].name || attrs_[i].kind != other.attrs_[i].kind ||
        attrs_[i].values != other.attrs_[i].values) {
      return false;
    }
  }
  return true;
}

DecisionTable::DecisionTable(Schema schema, std::uint64_t rows, std::vector<std::uint32_t> codes,
                             std::vector<std::vector<double>> raw)
    : schema_(std::move(schema)), rows_(rows), codes_(std::move(codes)), raw_(std::move(raw)) {
  if (codes_.size() != rows_ * schema_.attribute_count()) {
    throw ConfigError("cell matrix size does not match rows x attributes");
  }
  for (std::uint32_t a = 0; a < schema_.attribute_count(); ++a) {
    if (schema_.kind(a) == AttrKind::kContinuous) continue;
    const std::uint32_t limit = schema_.dictionary_size(a);
    for (std::uint64_t r = 0; r < rows_; ++r) {
      if (code(r, a) >= limit) {
        throw ConfigError("cell code out of dictionary range for attribute " +
                          schema_.attribute_name(a));
      }
    }
  }
}

bool DecisionTable::fully_categorical() const {
  for (std::uint32_t a = 0; a < schema_.attribute_count(); ++a) {
    if (schema_.kind(a) == AttrKind::kContinuous) return false;
  }
  return true;
}

bool DecisionTable::operator==(const DecisionTable& other) const {
  if (rows_ != other.rows_ || !(schema_ == other.schema_) || codes_ != other.codes_) {
    return false;
  }
  for (std::uint32_t a = 0; a < schema_.attribute_count(); ++a) {
    if (has_raw(a) != other.has_raw(a)) return false;
    if (has_raw(a) && raw_[a] != other.raw_[a]) return false;
  }
  return true;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Resolves a column given by name or decimal index against the header.
std::uint32_t resolve_column(const std::vector<std::string>& header, const std::string& selector,
                             const char* what) {
  if (!selector.empty() &&
      std::all_of(selector.begin(), selector.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    std::uint32_t idx = 0;
    std::from_chars(selector.data(), selector.data() + selector.size(), idx);
    if (idx >= header.size()) {
      throw ConfigError(std::string(what) + " column index out of range: " + selector);
    }
    return idx;
  }
  for (std::uint32_t i = 0; i < header.size(); ++i) {
    if (header[i] == selector) return i;
  }
  throw ConfigError(std::string(what) + " column not found: " + selector);
}

double parse_decimal(const std::string& text, std::uint64_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": not a decimal number: '" + text + "'");
  }
  return value;
}

}  // namespace

DecisionTable ingest_delimited(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw EmptyUniverseError("input file is empty: " + path);

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (options.has_header) {
    header = split_line(lines[0], options.delimiter);
    first_data = 1;
  } else {
    const auto width = split_line(lines[0], options.delimiter).size();
    header.reserve(width);
    for (std::size_t i = 0; i < width; ++i) header.push_back("c" + std::to_string(i));
  }
  const std::size_t width = header.size();
  if (lines.size() == first_data) {
    throw EmptyUniverseError("input has a header but no data rows: " + path);
  }

  if (!options.label_columns.empty() && !options.decision.empty()) {
    throw ConfigError("decision column and label merge are mutually exclusive");
  }

  std::vector<std::uint32_t> label_cols;
  for (const auto& sel : options.label_columns) {
    label_cols.push_back(resolve_column(header, sel, "label"));
  }
  std::sort(label_cols.begin(), label_cols.end());
  if (std::adjacent_find(label_cols.begin(), label_cols.end()) != label_cols.end()) {
    throw ConfigError("duplicate label column");
  }

  std::vector<bool> is_label(width, false);
  for (auto c : label_cols) is_label[c] = true;

  std::uint32_t decision_col = 0;
  if (label_cols.empty()) {
    decision_col = options.decision.empty()
                       ? static_cast<std::uint32_t>(width - 1)
                       : resolve_column(header, options.decision, "decision");
  }

  std::vector<bool> is_continuous(width, false);
  for (const auto& sel : options.continuous) {
    const auto col = resolve_column(header, sel, "continuous");
    if (is_label[col] || (label_cols.empty() && col == decision_col)) {
      throw ConfigError("decision column cannot be continuous");
    }
    is_continuous[col] = true;
  }

  // Output layout: source columns minus labels, in order; merged decision
  // appended last when label columns are given.
  std::vector<std::uint32_t> source_of;  // output attr -> source column
  Schema schema;
  for (std::uint32_t c = 0; c < width; ++c) {
    if (is_label[c]) continue;
    source_of.push_back(c);
    schema.add_attribute(header[c],
                         is_continuous[c] ? AttrKind::kContinuous : AttrKind::kCategorical);
  }
  std::uint32_t decision_attr = 0;
  if (!label_cols.empty()) {
    std::string merged_name;
    for (auto c : label_cols) {
      if (!merged_name.empty()) merged_name += '|';
      merged_name += header[c];
    }
    decision_attr = schema.add_attribute(merged_name, AttrKind::kCategorical);
  } else {
    for (std::uint32_t a = 0; a < source_of.size(); ++a) {
      if (source_of[a] == decision_col) decision_attr = a;
    }
  }
  schema.set_decision(decision_attr);

  const std::size_t attr_count = schema.attribute_count();
  const std::uint64_t rows = lines.size() - first_data;
  std::vector<std::uint32_t> codes(rows * attr_count, 0);
  std::vector<std::vector<double>> raw(attr_count);
  for (std::uint32_t a = 0; a < source_of.size(); ++a) {
    if (schema.kind(a) == AttrKind::kContinuous) raw[a].resize(rows);
  }

  for (std::uint64_t r = 0; r < rows; ++r) {
    const std::uint64_t line_no = first_data + r + 1;
    auto fields = split_line(lines[first_data + r], options.delimiter);
    if (fields.size() != width) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (std::uint32_t a = 0; a < source_of.size(); ++a) {
      const auto& text = fields[source_of[a]];
      if (schema.kind(a) == AttrKind::kContinuous) {
        raw[a][r] = parse_decimal(text, line_no);
      } else {
        codes[r * attr_count + a] = schema.intern(a, text);
      }
    }
    if (!label_cols.empty()) {
      std::string merged;
      for (auto c : label_cols) {
        if (!merged.empty()) merged += '|';
        merged += fields[c];
      }
      codes[r * attr_count + decision_attr] = schema.intern(decision_attr, merged);
    }
  }

  return DecisionTable(std::move(schema), rows, std::move(codes), std::move(raw));
}

namespace {

constexpr char kMagic[4] = {'P', 'R', 'D', 'S'};
constexpr std::uint8_t kVersion = 1;

void write_bytes(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  write_bytes(out, buf, sizeof(T));
}

void write_string(std::ostream& out, const std::string& s) {
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  write_bytes(out, s.data(), s.size());
}

void read_bytes(std::istream& in, void* data, std::size_t size) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size) {
    throw CorruptionError("store file is truncated");
  }
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  read_bytes(in, buf, sizeof(T));
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

std::string read_string(std::istream& in) {
  const auto size = read_le<std::uint32_t>(in);
  if (size > (1u << 28)) throw CorruptionError("unreasonable string length in store");
  std::string s(size, '\0');
  read_bytes(in, s.data(), size);
  return s;
}

}  // namespace

void save_store(const DecisionTable& table, const std::string& path) {
  if (!table.fully_categorical()) {
    throw ConfigError("table has undiscretized continuous attributes; apply cuts before saving");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open store for writing: " + path);

  const auto& schema = table.schema();
  write_bytes(out, kMagic, sizeof(kMagic));
  write_le<std::uint8_t>(out, kVersion);
  write_le<std::uint64_t>(out, table.row_count());
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(schema.attribute_count()));
  write_le<std::uint32_t>(out, schema.decision_index());
  for (std::uint32_t a = 0; a < schema.attribute_count(); ++a) {
    write_string(out, schema.attribute_name(a));
    write_le<std::uint8_t>(out, static_cast<std::uint8_t>(schema.kind(a)));
    write_le<std::uint32_t>(out, schema.dictionary_size(a));
    for (const auto& value : schema.dictionary(a)) write_string(out, value);
  }
  for (std::uint32_t c : table.cells()) write_le<std::uint32_t>(out, c);
  if (!out) throw CorruptionError("write failure on store: " + path);
}

DecisionTable load_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open store for reading: " + path);

  char magic[4];
  read_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a PRDS store: bad magic in " + path);
  }
  const auto version = read_le<std::uint8_t>(in);
  if (version != kVersion) {
    throw FormatError("unsupported store version " + std::to_string(version));
  }
  const auto rows = read_le<std::uint64_t>(in);
  const auto attr_count = read_le<std::uint32_t>(in);
  const auto decision = read_le<std::uint32_t>(in);
  if (attr_count == 0 || decision >= attr_count) {
    throw CorruptionError("store header is inconsistent");
  }

  Schema schema;
  for (std::uint32_t a = 0; a < attr_count; ++a) {
    auto name = read_string(in);
    const auto kind = static_cast<AttrKind>(read_le<std::uint8_t>(in));
    const auto idx = schema.add_attribute(std::move(name), kind);
    const auto dict_size = read_le<std::uint32_t>(in);
    for (std::uint32_t v = 0; v < dict_size; ++v) {
      schema.intern(idx, read_string(in));
    }
  }
  schema.set_decision(decision);

  std::vector<std::uint32_t> codes(rows * attr_count);
  for (auto& c : codes) c = read_le<std::uint32_t>(in);

  try {
    return DecisionTable(std::move(schema), rows, std::move(codes));
  } catch (const ConfigError& e) {
    throw CorruptionError(std::string("store cells are inconsistent: ") + e.what());
  }
}

DrawSequence::DrawSequence(std::uint64_t universe, std::uint64_t seed) : rng_(seed) {
  if (universe > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("draw sequence limited to 2^32-1 rows");
  }
  order_.resize(universe);
  std::iota(order_.begin(), order_.end(), 0u);
}

DrawSequence::DrawSequence(const DecisionTable& table, std::uint64_t seed)
    : DrawSequence(table.row_count(), seed) {}

std::optional<std::uint64_t> DrawSequence::next() {
  if (drawn_ == order_.size()) return std::nullopt;
  const std::uint64_t j = drawn_ + rng_.below(order_.size() - drawn_);
  std::swap(order_[drawn_], order_[j]);
  return order_[drawn_++];
}

}  // namespace prds
