#include "nidsbench/report.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace nidsbench {

nlohmann::json summary_json(const RunSummary& s) {
  nlohmann::json j;
  j["dataset"] = s.dataset;
  j["variant"] = s.variant;
  j["algorithm"] = s.algorithm;
  j["params"] = s.params;
  j["accuracy"] = s.accuracy;
  j["error"] = s.error;
  j["runtime_seconds"] = s.runtime_seconds;
  j["drift_indices"] = s.drift_indices;
  if (s.mean_faded_accuracy) j["mean_faded_accuracy"] = *s.mean_faded_accuracy;
  return j;
}

namespace {

bool keep_row(std::size_t pos, std::size_t count, std::size_t every) {
  return every <= 1 || pos % every == 0 || pos + 1 == count;
}

std::string trace_row(const TraceRecord& r) {
  return fmt::format("{},{},{:.10g},{:.10g}\n", r.index, r.correct, r.faded_accuracy, r.cumulative_accuracy);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

std::string trace_csv(const PrequentialTrace& trace, std::size_t every) {
  std::string out = "index,correct,faded_accuracy,cumulative_accuracy\n";
  const auto& r = trace.records;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (keep_row(i, r.size(), every)) out += trace_row(r[i]);
  return out;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "true\\predicted";
  for (const auto& l : cm.labels()) out += "," + csv_field(l);
  out += "\n";
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out += csv_field(cm.labels()[i]);
    for (std::size_t j = 0; j < cm.size(); ++j) out += fmt::format(",{}", cm.at(static_cast<int>(i), static_cast<int>(j)));
    out += "\n";
  }
  return out;
}

std::string combined_trace_csv(const std::vector<NamedTrace>& traces, std::size_t every) {
  std::string out = "algorithm,index,correct,faded_accuracy,cumulative_accuracy\n";
  for (const auto& t : traces) {
    const auto& r = t.trace->records;
    const std::string name = csv_field(t.name);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (keep_row(i, r.size(), every)) out += name + "," + trace_row(r[i]);
  }
  return out;
}

std::string svg_curve(const std::vector<NamedTrace>& traces, std::size_t every, const std::string& title) {
  std::size_t last = 0;
  for (const auto& t : traces)
    if (t.trace && !t.trace->records.empty()) last = std::max(last, t.trace->records.back().index);
  if (traces.empty() || last == 0) throw std::invalid_argument("no trace data to plot");

  constexpr double width = 960, height = 420;
  constexpr double left = 60, right = 180, top = 36, bottom = 44;
  const double pw = width - left - right, ph = height - top - bottom;
  const double x_span = last > 1 ? static_cast<double>(last - 1) : 1.0;
  auto sx = [&](std::size_t index) { return left + pw * static_cast<double>(index - 1) / x_span; };
  auto sy = [&](double acc) { return top + ph * (1.0 - acc); };
  static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n", width, height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  if (!title.empty())
    out += fmt::format("<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, xml_escape(title));

  out += "<g stroke=\"#bbbbbb\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double acc = i / 4.0;
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>", left, sy(acc), left + pw, sy(acc));
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" text-anchor=\"end\">{:.2f}</text>\n", left - 6,
                       sy(acc) + 4, acc);
  }
  for (int i = 0; i <= 5; ++i) {
    const auto index = 1 + static_cast<std::size_t>(x_span * i / 5.0);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" text-anchor=\"middle\">{}</text>\n", sx(index),
                       top + ph + 16, index);
  }
  out += "</g>\n";
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n", left,
                     top, pw, ph);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "text-anchor=\"middle\">instance</text>\n",
                     left + pw / 2, height - 8);
  out += fmt::format("<text x=\"14\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
                     "transform=\"rotate(-90 14 {:.2f})\">faded accuracy</text>\n",
                     top + ph / 2, top + ph / 2);

  const std::size_t step = std::max<std::size_t>(every, 1);
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const char* color = palette[t % palette.size()];
    out += fmt::format("<polyline data-name=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"",
                       xml_escape(traces[t].name), color);
    const auto& r = traces[t].trace->records;
    bool first = true;
    for (std::size_t b = 0; b < r.size(); b += step) {
      std::size_t pick = b;
      for (std::size_t i = b; i < std::min(b + step, r.size()); ++i)
        if (r[i].faded_accuracy < r[pick].faded_accuracy) pick = i;
      out += fmt::format("{}{:.2f},{:.2f}", first ? "" : " ", sx(r[pick].index), sy(r[pick].faded_accuracy));
      first = false;
    }
    out += "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(t);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" stroke-width=\"2\"/>",
                       left + pw + 12, ly, left + pw + 32, color);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                       left + pw + 38, ly + 4, xml_escape(traces[t].name));
  }
  out += "</svg>\n";
  return out;
}

std::string artifact_stem(const std::string& dataset, const std::string& variant, const std::string& algorithm,
                          std::uint64_t seed) {
  std::string ds = std::filesystem::path(dataset).filename().string();
  for (char& c : ds)
    if (c == '.' || c == ' ') c = '-';
  return fmt::format("{}_{}_{}_s{}", ds, variant, algorithm, seed);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out.flush()) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

} // namespace nidsbench
