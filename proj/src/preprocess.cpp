#include "nidsbench/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace nidsbench {

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "v1" || text == "V1") return Variant::v1;
  if (text == "v2" || text == "V2") return Variant::v2;
  if (text == "v3" || text == "V3") return Variant::v3;
  return std::nullopt;
}

std::string_view to_string(Variant v) {
  switch (v) {
  case Variant::v1: return "v1";
  case Variant::v2: return "v2";
  case Variant::v3: return "v3";
  }
  return "?";
}

AttackCategoryMap AttackCategoryMap::kdd_canonical() {
  std::map<std::string, std::string, std::less<>> m;
  for (const char* a : {"back", "land", "neptune", "pod", "smurf", "teardrop"}) m[a] = "dos";
  for (const char* a : {"ipsweep", "nmap", "portsweep", "satan"}) m[a] = "probe";
  for (const char* a : {"ftp_write", "guess_passwd", "imap", "multihop", "phf", "spy", "warezclient", "warezmaster"})
    m[a] = "r2l";
  for (const char* a : {"buffer_overflow", "loadmodule", "perl", "rootkit"}) m[a] = "u2r";
  return AttackCategoryMap(std::move(m));
}

std::optional<std::string> AttackCategoryMap::category(std::string_view label) const {
  if (label == "normal") return std::string("normal");
  auto it = map_.find(label);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

PreprocessVariant PreprocessVariant::make(Variant id) {
  PreprocessVariant v;
  v.id = id;
  switch (id) {
  case Variant::v1: v.target_labels = {"normal", "dos", "probe", "u2r", "r2l"}; break;
  case Variant::v2: v.target_labels = {"normal", "attack"}; break;
  case Variant::v3:
    v.target_labels = {"normal"};
    const auto map = AttackCategoryMap::kdd_canonical();
    for (const auto& [attack, category] : map.entries()) v.target_labels.push_back(attack);
    break;
  }
  return v;
}

Dataset apply_variant(const Dataset& ds, Variant v, const AttackCategoryMap& map) {
  Dataset out;
  out.schema = ds.schema;
  out.schema.class_labels = PreprocessVariant::make(v).target_labels;
  out.provenance = ds.provenance;

  std::vector<int> relabel(ds.schema.num_classes(), -1);
  for (std::size_t c = 0; c < ds.schema.num_classes(); ++c) {
    const std::string& raw = ds.schema.class_labels[c];
    if (v == Variant::v3) {
      relabel[c] = out.schema.intern_class(raw);
      continue;
    }
    auto category = map.category(raw);
    if (!category) continue; // only an error if some instance carries it
    if (v == Variant::v1)
      relabel[c] = out.schema.find_class(*category);
    else
      relabel[c] = out.schema.find_class(*category == "normal" ? "normal" : "attack");
  }

  out.instances.reserve(ds.size());
  for (const auto& inst : ds.instances) {
    int to = relabel[static_cast<std::size_t>(inst.label)];
    if (to < 0)
      throw DataError(fmt::format("label '{}' is not in the attack category map",
                                  ds.schema.class_labels[static_cast<std::size_t>(inst.label)]));
    out.instances.push_back(Instance{inst.values, to});
  }
  out.add_provenance(fmt::format("variant={}", to_string(v)));
  return out;
}

SelectionSpec SelectionSpec::default_set() { return {{1, 2, 5, 6, 9, 23, 24, 29, 32, 33, 34, 36}}; }

SelectionSpec SelectionSpec::all(std::size_t attribute_count) {
  SelectionSpec s;
  s.keep_indices.resize(attribute_count);
  std::iota(s.keep_indices.begin(), s.keep_indices.end(), std::size_t{1});
  return s;
}

SelectionSpec SelectionSpec::parse(std::string_view text, std::size_t attribute_count) {
  if (text == "selected") return default_set();
  if (text == "all") return all(attribute_count);
  SelectionSpec s;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument(fmt::format("bad attribute index '{}'", tok));
    s.keep_indices.push_back(idx);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  s.validate(attribute_count);
  return s;
}

void SelectionSpec::validate(std::size_t attribute_count) const {
  if (keep_indices.empty()) throw std::invalid_argument("attribute selection is empty");
  for (std::size_t i = 0; i < keep_indices.size(); ++i) {
    std::size_t idx = keep_indices[i];
    if (idx < 1 || idx > attribute_count)
      throw std::out_of_range(fmt::format("attribute index {} outside [1, {}]", idx, attribute_count));
    if (i > 0 && idx <= keep_indices[i - 1])
      throw std::invalid_argument("attribute indices must be strictly increasing");
  }
}

Dataset select_attributes(const Dataset& ds, const SelectionSpec& spec) {
  spec.validate(ds.schema.size());
  Dataset out;
  out.schema.class_labels = ds.schema.class_labels;
  out.schema.ignored_trailing_fields = ds.schema.ignored_trailing_fields;
  for (std::size_t idx : spec.keep_indices) out.schema.attributes.push_back(ds.schema.attributes[idx - 1]);
  out.provenance = ds.provenance;

  out.instances.reserve(ds.size());
  for (const auto& inst : ds.instances) {
    Instance r;
    r.label = inst.label;
    r.values.reserve(spec.keep_indices.size());
    for (std::size_t idx : spec.keep_indices) r.values.push_back(inst.values[idx - 1]);
    out.instances.push_back(std::move(r));
  }
  std::string list;
  for (std::size_t idx : spec.keep_indices) list += (list.empty() ? "" : ",") + std::to_string(idx);
  out.add_provenance(fmt::format("attributes={}", list));
  return out;
}

namespace {

std::size_t max_count(const std::vector<std::size_t>& counts) { return *std::max_element(counts.begin(), counts.end()); }

/// First class with the largest count.
std::size_t majority(const std::vector<std::size_t>& counts) {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

double nominal_oner(const Dataset& ds, std::size_t attribute) {
  const std::size_t classes = ds.schema.num_classes();
  const std::size_t values = ds.schema.attributes[attribute].domain.size();
  std::vector<std::vector<std::size_t>> counts(values, std::vector<std::size_t>(classes, 0));
  for (const auto& inst : ds.instances)
    ++counts[static_cast<std::size_t>(inst.values[attribute])][static_cast<std::size_t>(inst.label)];
  std::size_t correct = 0;
  for (const auto& c : counts) correct += max_count(c);
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double numeric_oner(const Dataset& ds, std::size_t attribute, std::size_t min_bucket) {
  const std::size_t classes = ds.schema.num_classes();
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ds.instances[a].values[attribute] < ds.instances[b].values[attribute];
  });
  auto value = [&](std::size_t pos) { return ds.instances[order[pos]].values[attribute]; };
  auto label = [&](std::size_t pos) { return static_cast<std::size_t>(ds.instances[order[pos]].label); };

  // Greedy buckets over the sorted values. A bucket closes once its majority
  // class has min_bucket members, after absorbing any following instances
  // that share its last value or its majority class.
  std::vector<std::vector<std::size_t>> buckets;
  const std::size_t n = order.size();
  std::size_t pos = 0;
  while (pos < n) {
    std::vector<std::size_t> counts(classes, 0);
    while (pos < n) {
      ++counts[label(pos)];
      ++pos;
      if (max_count(counts) >= min_bucket && (pos == n || value(pos) != value(pos - 1))) break;
    }
    const std::size_t maj = majority(counts);
    while (pos < n && (value(pos) == value(pos - 1) || label(pos) == maj)) {
      ++counts[label(pos)];
      ++pos;
    }
    buckets.push_back(std::move(counts));
  }

  // Adjacent buckets with the same majority class merge; the merged bucket
  // keeps that majority, so the score is the sum of per-bucket majorities.
  std::size_t correct = 0;
  std::vector<std::size_t> merged;
  for (auto& b : buckets) {
    if (!merged.empty() && majority(merged) == majority(b)) {
      for (std::size_t c = 0; c < classes; ++c) merged[c] += b[c];
      continue;
    }
    if (!merged.empty()) correct += max_count(merged);
    merged = b;
  }
  if (!merged.empty()) correct += max_count(merged);
  return static_cast<double>(correct) / static_cast<double>(n);
}

} // namespace

double oner_accuracy(const Dataset& ds, std::size_t attribute, std::size_t min_bucket) {
  if (ds.empty()) throw DataError("OneR on an empty dataset");
  if (attribute >= ds.schema.size()) throw std::out_of_range("OneR attribute index");
  if (ds.schema.attributes[attribute].is_nominal()) return nominal_oner(ds, attribute);
  return numeric_oner(ds, attribute, std::max<std::size_t>(min_bucket, 1));
}

std::vector<OneRScore> oner_rank(const Dataset& ds, std::size_t min_bucket) {
  if (ds.empty()) throw DataError("OneR on an empty dataset");
  std::vector<OneRScore> scores;
  scores.reserve(ds.schema.size());
  for (std::size_t a = 0; a < ds.schema.size(); ++a) scores.push_back({a + 1, oner_accuracy(ds, a, min_bucket)});
  std::stable_sort(scores.begin(), scores.end(),
                   [](const OneRScore& x, const OneRScore& y) { return x.accuracy > y.accuracy; });
  return scores;
}

Normalizer Normalizer::fit(const Dataset& train) { return fit(train, train.size()); }

Normalizer Normalizer::fit(const Dataset& train, std::size_t count) {
  count = std::min(count, train.size());
  if (count == 0) throw DataError("cannot fit a normalizer on no instances");
  const auto d = static_cast<Eigen::Index>(train.schema.size());
  Normalizer n;
  n.min_ = Eigen::ArrayXd::Constant(d, std::numeric_limits<double>::infinity());
  n.max_ = Eigen::ArrayXd::Constant(d, -std::numeric_limits<double>::infinity());
  for (const auto& a : train.schema.attributes) {
    n.names_.push_back(a.name);
    n.numeric_.push_back(!a.is_nominal());
  }
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Map<const Eigen::ArrayXd> row(train.instances[i].values.data(), d);
    n.min_ = n.min_.min(row);
    n.max_ = n.max_.max(row);
  }
  return n;
}

void Normalizer::apply_in_place(Instance& inst) const {
  for (std::size_t j = 0; j < numeric_.size(); ++j) {
    if (!numeric_[j]) continue;
    const auto jj = static_cast<Eigen::Index>(j);
    const double range = max_[jj] - min_[jj];
    double& x = inst.values[j];
    x = range > 0.0 ? std::clamp((x - min_[jj]) / range, 0.0, 1.0) : 0.0;
  }
}

Dataset Normalizer::apply(const Dataset& ds) const {
  if (ds.schema.size() != names_.size()) throw DataError("normalizer fitted on a different attribute layout");
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (ds.schema.attributes[j].name != names_[j] || ds.schema.attributes[j].is_nominal() == numeric_[j])
      throw DataError(fmt::format("normalizer attribute {} is '{}', dataset has '{}'", j + 1, names_[j],
                                  ds.schema.attributes[j].name));
  Dataset out = ds;
  for (auto& inst : out.instances) apply_in_place(inst);
  out.add_provenance("normalized=minmax");
  return out;
}

OneHotEncoder OneHotEncoder::from_schema(const AttributeSchema& schema) { return build(schema, nullptr); }

OneHotEncoder OneHotEncoder::fit(const Dataset& train) { return build(train.schema, &train); }

OneHotEncoder OneHotEncoder::build(const AttributeSchema& schema, const Dataset* observed) {
  OneHotEncoder enc;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& attr = schema.attributes[j];
    Column col;
    col.name = attr.name;
    col.nominal = attr.is_nominal();
    if (!col.nominal) {
      ++enc.width_;
      enc.columns_.push_back(std::move(col));
      continue;
    }
    std::vector<bool> seen(attr.domain.size(), observed == nullptr);
    if (observed != nullptr)
      for (const auto& inst : observed->instances) seen[static_cast<std::size_t>(inst.values[j])] = true;
    col.slot.assign(attr.domain.size(), -1);
    int next = 0;
    for (std::size_t v = 0; v < attr.domain.size(); ++v) {
      if (!seen[v]) continue;
      col.slot[v] = next++;
      col.symbols.push_back(attr.domain[v]);
    }
    enc.width_ += static_cast<std::size_t>(next);
    enc.columns_.push_back(std::move(col));
  }
  return enc;
}

AttributeSchema OneHotEncoder::output_schema(const AttributeSchema& input) const {
  if (input.size() != columns_.size()) throw DataError("encoder fitted on a different attribute layout");
  AttributeSchema out;
  out.class_labels = input.class_labels;
  for (const auto& col : columns_) {
    if (!col.nominal) {
      out.attributes.push_back(Attribute{col.name, AttributeKind::numeric, {}});
      continue;
    }
    for (const auto& sym : col.symbols)
      out.attributes.push_back(Attribute{col.name + "=" + sym, AttributeKind::numeric, {}});
  }
  return out;
}

Instance OneHotEncoder::encode(const Instance& inst, std::size_t* unseen) const {
  Instance r;
  r.label = inst.label;
  r.values.assign(width_, 0.0);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& col = columns_[j];
    if (!col.nominal) {
      r.values[offset++] = inst.values[j];
      continue;
    }
    const auto v = static_cast<std::size_t>(inst.values[j]);
    if (v < col.slot.size() && col.slot[v] >= 0)
      r.values[offset + static_cast<std::size_t>(col.slot[v])] = 1.0;
    else if (unseen)
      ++*unseen;
    offset += col.symbols.size();
  }
  return r;
}

Dataset OneHotEncoder::encode(const Dataset& ds) const {
  Dataset out;
  out.schema = output_schema(ds.schema);
  out.provenance = ds.provenance;
  out.instances.reserve(ds.size());
  std::size_t unseen = 0;
  for (const auto& inst : ds.instances) out.instances.push_back(encode(inst, &unseen));
  out.add_provenance(unseen == 0 ? std::string("onehot") : fmt::format("onehot(unseen_symbols={})", unseen));
  return out;
}

Dataset one_hot_encode(const Dataset& ds) {
  if (!ds.schema.has_nominal()) return ds;
  return OneHotEncoder::from_schema(ds.schema).encode(ds);
}

} // namespace nidsbench
