#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nidsbench {

/// Raised for malformed input data. Carries the 1-based line number and the
/// 1-based field index when they are known (0 otherwise).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public DataError {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t field);

  std::size_t line() const noexcept { return line_; }
  std::size_t field() const noexcept { return field_; }

private:
  std::size_t line_;
  std::size_t field_;
};

enum class AttributeKind { numeric, nominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  /// Symbols in first-seen order. Instances store the position of a symbol
  /// in this list.
  std::vector<std::string> domain;

  bool is_nominal() const noexcept { return kind == AttributeKind::nominal; }
  /// Position of `symbol` in the domain, or -1.
  int find(std::string_view symbol) const;
  /// Position of `symbol`, appending it to the domain when absent.
  int intern(std::string_view symbol);

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// Ordered attribute descriptors plus the class label set.
///
/// Nominal domains and class labels are open while parsing and are checked
/// by `validate()` once a dataset is complete.
struct AttributeSchema {
  std::vector<Attribute> attributes;
  std::vector<std::string> class_labels;
  /// Extra fields after the label that are read and dropped (the NSL-KDD text
  /// distribution appends a difficulty score).
  std::size_t ignored_trailing_fields = 0;

  std::size_t size() const noexcept { return attributes.size(); }
  std::size_t num_classes() const noexcept { return class_labels.size(); }
  std::size_t expected_fields() const noexcept { return attributes.size() + 1 + ignored_trailing_fields; }

  int find_class(std::string_view label) const;
  int intern_class(std::string_view label);
  /// Index of the attribute called `name`, or -1.
  int find_attribute(std::string_view name) const;

  bool has_nominal() const;

  /// Throws DataError when names repeat or a nominal domain is empty.
  void validate() const;

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;
};

/// The 41-feature KDD Cup 1999 connection-record schema. Nominal domains for
/// protocol_type, flag and the binary indicator fields are seeded in their
/// documented order; service and the class labels grow as data is read.
AttributeSchema kdd_schema();

/// One connection record. Numeric values are stored as-is; nominal values
/// hold the index of their symbol in the attribute's domain.
struct Instance {
  std::vector<double> values;
  int label = -1;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Dataset {
  AttributeSchema schema;
  std::vector<Instance> instances;
  std::string provenance;

  std::size_t size() const noexcept { return instances.size(); }
  bool empty() const noexcept { return instances.empty(); }

  /// Per-class instance counts in schema label order.
  std::vector<std::size_t> class_counts() const;
  /// Same schema and provenance, instances at `rows` in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Appends "; step" to the provenance text.
  void add_provenance(std::string_view step);

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Parses one comma-separated record. Unknown nominal symbols and labels are
/// added to `schema`. A single trailing '.' on the label is removed.
Instance parse_kdd_line(std::string_view line, AttributeSchema& schema, std::size_t line_number = 0);

/// Inverse of parse_kdd_line (labels are written without the trailing dot).
std::string format_kdd_line(const Instance& instance, const AttributeSchema& schema);

/// Loads every non-empty line of `path` (plain text or gzip). `schema` seeds
/// the attribute layout and is extended with the symbols seen.
Dataset load_dataset(const std::string& path, AttributeSchema schema);
Dataset load_dataset(const std::string& path);

/// Parses records held in memory; `source` is used for provenance and errors.
Dataset parse_dataset(std::string_view text, AttributeSchema schema, std::string_view source = "<memory>");

/// Writes the dataset in record format, one instance per line.
void write_dataset(const Dataset& ds, const std::string& path);

} // namespace nidsbench
