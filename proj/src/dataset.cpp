#include "nidsbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <fmt/format.h>
#include <zlib.h>

namespace nidsbench {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t field)
    : DataError(line == 0 ? what
                          : (field == 0 ? fmt::format("line {}: {}", line, what)
                                        : fmt::format("line {}, field {}: {}", line, field, what))),
      line_(line), field_(field) {}

int Attribute::find(std::string_view symbol) const {
  auto it = std::find(domain.begin(), domain.end(), symbol);
  return it == domain.end() ? -1 : static_cast<int>(it - domain.begin());
}

int Attribute::intern(std::string_view symbol) {
  int idx = find(symbol);
  if (idx >= 0) return idx;
  domain.emplace_back(symbol);
  return static_cast<int>(domain.size() - 1);
}

int AttributeSchema::find_class(std::string_view label) const {
  auto it = std::find(class_labels.begin(), class_labels.end(), label);
  return it == class_labels.end() ? -1 : static_cast<int>(it - class_labels.begin());
}

int AttributeSchema::intern_class(std::string_view label) {
  int idx = find_class(label);
  if (idx >= 0) return idx;
  class_labels.emplace_back(label);
  return static_cast<int>(class_labels.size() - 1);
}

int AttributeSchema::find_attribute(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == name) return static_cast<int>(i);
  return -1;
}

bool AttributeSchema::has_nominal() const {
  return std::any_of(attributes.begin(), attributes.end(), [](const Attribute& a) { return a.is_nominal(); });
}

void AttributeSchema::validate() const {
  std::unordered_set<std::string_view> seen;
  for (const auto& a : attributes) {
    if (!seen.insert(a.name).second) throw DataError(fmt::format("duplicate attribute name '{}'", a.name));
    if (a.is_nominal() && a.domain.empty())
      throw DataError(fmt::format("nominal attribute '{}' has an empty domain", a.name));
  }
}

AttributeSchema kdd_schema() {
  struct Spec {
    const char* name;
    AttributeKind kind;
  };
  constexpr auto N = AttributeKind::numeric;
  constexpr auto S = AttributeKind::nominal;
  static constexpr Spec specs[] = {
      {"duration", N},
      {"protocol_type", S},
      {"service", S},
      {"flag", S},
      {"src_bytes", N},
      {"dst_bytes", N},
      {"land", S},
      {"wrong_fragment", N},
      {"urgent", N},
      {"hot", N},
      {"num_failed_logins", N},
      {"logged_in", S},
      {"num_compromised", N},
      {"root_shell", N},
      {"su_attempted", N},
      {"num_root", N},
      {"num_file_creations", N},
      {"num_shells", N},
      {"num_access_files", N},
      {"num_outbound_cmds", N},
      {"is_host_login", S},
      {"is_guest_login", S},
      {"count", N},
      {"srv_count", N},
      {"serror_rate", N},
      {"srv_serror_rate", N},
      {"rerror_rate", N},
      {"srv_rerror_rate", N},
      {"same_srv_rate", N},
      {"diff_srv_rate", N},
      {"srv_diff_host_rate", N},
      {"dst_host_count", N},
      {"dst_host_srv_count", N},
      {"dst_host_same_srv_rate", N},
      {"dst_host_diff_srv_rate", N},
      {"dst_host_same_src_port_rate", N},
      {"dst_host_srv_diff_host_rate", N},
      {"dst_host_serror_rate", N},
      {"dst_host_srv_serror_rate", N},
      {"dst_host_rerror_rate", N},
      {"dst_host_srv_rerror_rate", N},
  };
  AttributeSchema schema;
  schema.attributes.reserve(std::size(specs));
  for (const auto& s : specs) schema.attributes.push_back(Attribute{s.name, s.kind, {}});

  auto seed = [&](const char* name, std::initializer_list<const char*> symbols) {
    auto& attr = schema.attributes[static_cast<std::size_t>(schema.find_attribute(name))];
    for (const char* sym : symbols) attr.intern(sym);
  };
  seed("protocol_type", {"tcp", "udp", "icmp"});
  seed("flag", {"SF", "S0", "REJ", "RSTR", "RSTO", "SH", "S1", "S2", "RSTOS0", "S3", "OTH"});
  for (const char* name : {"land", "logged_in", "is_host_login", "is_guest_login"}) seed(name, {"0", "1"});
  return schema;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(schema.num_classes(), 0);
  for (const auto& inst : instances) ++counts[static_cast<std::size_t>(inst.label)];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.schema = schema;
  out.provenance = provenance;
  out.instances.reserve(rows.size());
  for (std::size_t r : rows) out.instances.push_back(instances.at(r));
  return out;
}

void Dataset::add_provenance(std::string_view step) {
  if (!provenance.empty()) provenance += "; ";
  provenance += step;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

} // namespace

Instance parse_kdd_line(std::string_view line, AttributeSchema& schema, std::size_t line_number) {
  line = trim(line);
  const std::size_t expected = schema.expected_fields();

  std::vector<std::string_view> fields;
  fields.reserve(expected);
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != expected)
    throw ParseError(fmt::format("expected {} fields, found {}", expected, fields.size()), line_number, 0);

  Instance inst;
  inst.values.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    std::string_view f = fields[i];
    if (f.empty()) throw ParseError("empty field", line_number, i + 1);
    auto& attr = schema.attributes[i];
    if (attr.is_nominal()) {
      inst.values[i] = attr.intern(f);
      continue;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
      throw ParseError(fmt::format("cannot parse numeric value '{}' for {}", f, attr.name), line_number, i + 1);
    inst.values[i] = v;
  }

  std::string_view label = fields[schema.size()];
  if (!label.empty() && label.back() == '.') label.remove_suffix(1);
  if (label.empty()) throw ParseError("empty label", line_number, schema.size() + 1);
  inst.label = schema.intern_class(label);
  return inst;
}

std::string format_kdd_line(const Instance& instance, const AttributeSchema& schema) {
  std::string out;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& attr = schema.attributes[i];
    if (attr.is_nominal())
      out += attr.domain.at(static_cast<std::size_t>(instance.values[i]));
    else
      fmt::format_to(std::back_inserter(out), "{}", instance.values[i]);
    out += ',';
  }
  out += schema.class_labels.at(static_cast<std::size_t>(instance.label));
  return out;
}

namespace {

void finalize(Dataset& ds, std::string_view source) {
  if (ds.instances.empty()) throw DataError(fmt::format("{}: no instances", source));
  ds.schema.validate();
}

} // namespace

Dataset parse_dataset(std::string_view text, AttributeSchema schema, std::string_view source) {
  Dataset ds;
  ds.schema = std::move(schema);
  ds.provenance = fmt::format("source={}", source);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line_no;
    if (!trim(line).empty()) ds.instances.push_back(parse_kdd_line(line, ds.schema, line_no));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  finalize(ds, source);
  return ds;
}

Dataset load_dataset(const std::string& path, AttributeSchema schema) {
  // gzread passes uncompressed files through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  gzbuffer(file, 1 << 18);

  std::string text;
  std::vector<char> buf(1 << 20);
  while (true) {
    int n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      int code = 0;
      std::string msg = gzerror(file, &code);
      gzclose(file);
      throw std::runtime_error(fmt::format("read error on '{}': {}", path, msg));
    }
    if (n == 0) break;
    text.append(buf.data(), static_cast<std::size_t>(n));
  }
  gzclose(file);
  return parse_dataset(text, std::move(schema), path);
}

Dataset load_dataset(const std::string& path) { return load_dataset(path, kdd_schema()); }

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  for (const auto& inst : ds.instances) out << format_kdd_line(inst, ds.schema) << '\n';
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path));
}

} // namespace nidsbench
