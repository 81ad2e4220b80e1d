#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nidsbench/dataset.hpp"

namespace nidsbench {

enum class Variant { v1, v2, v3 };

std::optional<Variant> parse_variant(std::string_view text);
std::string_view to_string(Variant v);

/// Attack label -> category (dos, probe, u2r, r2l).
class AttackCategoryMap {
public:
  /// The assignment shipped with the KDD Cup 1999 distribution (22 attacks).
  static AttackCategoryMap kdd_canonical();

  explicit AttackCategoryMap(std::map<std::string, std::string, std::less<>> entries) : map_(std::move(entries)) {}

  /// Category of an attack label; "normal" maps to itself; nullopt if unknown.
  std::optional<std::string> category(std::string_view label) const;
  std::size_t size() const noexcept { return map_.size(); }
  const auto& entries() const noexcept { return map_; }

private:
  std::map<std::string, std::string, std::less<>> map_;
};

struct PreprocessVariant {
  Variant id = Variant::v1;
  std::vector<std::string> target_labels;

  /// V1: normal, dos, probe, u2r, r2l. V2: normal, attack. V3: normal then the
  /// 22 canonical attacks in alphabetical order.
  static PreprocessVariant make(Variant id);
};

/// Relabels classes; features and instance order are untouched. V3 keeps the
/// raw labels (labels outside the canonical 23 are appended in first-seen
/// order). Throws DataError for labels the map does not know under V1/V2.
Dataset apply_variant(const Dataset& ds, Variant v, const AttackCategoryMap& map = AttackCategoryMap::kdd_canonical());

/// 1-based attribute indices to keep, strictly increasing.
struct SelectionSpec {
  std::vector<std::size_t> keep_indices;

  /// 1, 2, 5, 6, 9, 23, 24, 29, 32, 33, 34, 36.
  static SelectionSpec default_set();
  static SelectionSpec all(std::size_t attribute_count);
  /// "selected", "all" (needs attribute_count) or a list such as "1,5,9".
  static SelectionSpec parse(std::string_view text, std::size_t attribute_count);

  /// Throws std::out_of_range / std::invalid_argument on bad indices.
  void validate(std::size_t attribute_count) const;
};

Dataset select_attributes(const Dataset& ds, const SelectionSpec& spec);

struct OneRScore {
  std::size_t attribute; ///< 1-based
  double accuracy;
};

/// Training accuracy of the single-attribute rule on attribute `attribute`
/// (0-based). Numeric attributes are bucketed over sorted values so that each
/// bucket's majority class has at least `min_bucket` members.
double oner_accuracy(const Dataset& ds, std::size_t attribute, std::size_t min_bucket = 6);

/// All attributes sorted by one-rule accuracy, descending; ties by index.
std::vector<OneRScore> oner_rank(const Dataset& ds, std::size_t min_bucket = 6);

/// Min-max scaling of the numeric attributes, fitted on training data.
class Normalizer {
public:
  static Normalizer fit(const Dataset& train);
  /// Fits on the first `count` instances only (stream warm-up).
  static Normalizer fit(const Dataset& train, std::size_t count);

  /// (x - min)/(max - min) clamped to [0, 1]; constant attributes give 0.
  /// Throws DataError when the dataset's attribute layout differs.
  Dataset apply(const Dataset& ds) const;
  void apply_in_place(Instance& inst) const;

  const Eigen::ArrayXd& min() const noexcept { return min_; }
  const Eigen::ArrayXd& max() const noexcept { return max_; }

private:
  std::vector<std::string> names_;
  std::vector<bool> numeric_;
  Eigen::ArrayXd min_;
  Eigen::ArrayXd max_;
};

/// One-hot expansion of nominal attributes. Symbols outside the fitted
/// indicator set encode as an all-zero block.
class OneHotEncoder {
public:
  /// One indicator per domain symbol, in domain order.
  static OneHotEncoder from_schema(const AttributeSchema& schema);
  /// Indicators only for symbols that occur in `train` (domain order), so
  /// nothing outside the training rows shapes the encoding.
  static OneHotEncoder fit(const Dataset& train);

  /// All-numeric dataset with the same labels. Unseen-symbol counts are added
  /// to the provenance.
  Dataset encode(const Dataset& ds) const;
  /// One row; increments *unseen per unseen symbol when given.
  Instance encode(const Instance& inst, std::size_t* unseen = nullptr) const;
  AttributeSchema output_schema(const AttributeSchema& input) const;
  std::size_t output_width() const noexcept { return width_; }

private:
  static OneHotEncoder build(const AttributeSchema& schema, const Dataset* observed);

  struct Column {
    bool nominal = false;
    std::string name;
    std::vector<int> slot; ///< domain index -> output offset, -1 if unseen
    std::vector<std::string> symbols;
  };
  std::vector<Column> columns_;
  std::size_t width_ = 0;
};

/// Encodes with the full frozen domains of `ds.schema`.
Dataset one_hot_encode(const Dataset& ds);

} // namespace nidsbench
