#include "nidsbench/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "nidsbench/evaluation.hpp"
#include "nidsbench/fetch.hpp"
#include "nidsbench/learners.hpp"
#include "nidsbench/mlp.hpp"
#include "nidsbench/preprocess.hpp"
#include "nidsbench/prequential.hpp"
#include "nidsbench/report.hpp"

namespace fs = std::filesystem;

namespace nidsbench {

namespace {

/// Bad flag values discovered after parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) items.push_back(item);
  return items;
}

Variant variant_of(const RunConfig& cfg) {
  const auto v = parse_variant(cfg.variant);
  if (!v) throw UsageError(fmt::format("unknown variant '{}' (expected v1, v2 or v3)", cfg.variant));
  return *v;
}

std::string cache_dir_of(const RunConfig& cfg) {
  return cfg.cache.empty() ? default_cache_dir().string() : cfg.cache;
}

/// Variant relabeling then attribute selection.
Dataset prepared_dataset(const RunConfig& cfg, Dataset raw) {
  Dataset ds = apply_variant(raw, variant_of(cfg));
  SelectionSpec spec;
  try {
    spec = SelectionSpec::parse(cfg.attrs, ds.schema.size());
  } catch (const std::exception& e) {
    throw UsageError(fmt::format("--attrs {}: {}", cfg.attrs, e.what()));
  }
  return select_attributes(ds, spec);
}

std::string input_path(const RunConfig& cfg) {
  if (const auto src = known_source(cfg.data)) return (fs::path(cache_dir_of(cfg)) / src->file_name).string();
  return cfg.data;
}

nlohmann::json manifest_json(const RunConfig& cfg) {
  nlohmann::json m;
  m["config"] = cfg.to_json();
  nlohmann::json inputs = nlohmann::json::array();
  const std::string path = input_path(cfg);
  if (fs::exists(path)) inputs.push_back({{"path", fs::path(path).filename().string()}, {"sha256", sha256_file(path)}});
  m["inputs"] = inputs;
  return m;
}

LearnerParams learner_params(const RunConfig& cfg) {
  LearnerParams p;
  p.k = cfg.k;
  p.sample = cfg.sample;
  p.seed = cfg.seed;
  p.window = cfg.window;
  p.boost_members = cfg.members;
  return p;
}

Algorithm algorithm_of(const std::string& name, bool stream) {
  const auto a = parse_algorithm(name);
  if (!a) throw UsageError(fmt::format("unknown algorithm '{}'", name));
  if (is_stream(*a) != stream)
    throw UsageError(fmt::format("'{}' is a {} algorithm", name, is_stream(*a) ? "stream" : "batch"));
  return *a;
}

nlohmann::json batch_params(const RunConfig& cfg, Algorithm a) {
  nlohmann::json p{{"folds", cfg.folds}, {"seed", cfg.seed}, {"attrs", cfg.attrs}};
  if (a == Algorithm::knn) {
    p["k"] = cfg.k;
    p["sample"] = cfg.sample;
  }
  return p;
}

nlohmann::json stream_params(const RunConfig& cfg, Algorithm a) {
  nlohmann::json p{{"alpha", cfg.alpha},
                   {"seed", cfg.seed},
                   {"attrs", cfg.attrs},
                   {"drop_threshold", cfg.drop_threshold},
                   {"drift_window", cfg.drift_window}};
  if (a == Algorithm::wknn) {
    p["k"] = cfg.k;
    p["window"] = cfg.window;
  }
  if (a == Algorithm::ozaboost) p["members"] = cfg.members;
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_fetch(const RunConfig& cfg, std::ostream& out) {
  auto src = known_source(cfg.data);
  if (!src) throw UsageError(fmt::format("fetch needs a known dataset name (kdd99-10 or nsl-kdd), got '{}'", cfg.data));
  if (cfg.sha256.empty()) throw UsageError("fetch needs --sha256 with the expected digest of the file");
  const std::string url = cfg.url.empty() ? src->url : cfg.url;
  const fs::path path = fetch_dataset(src->file_name, url, cfg.sha256, cache_dir_of(cfg));
  out << fmt::format("fetched {} -> {}\n", cfg.data, path.string());
  return exit_ok;
}

int cmd_preprocess(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = prepared_dataset(cfg, resolve_dataset(cfg.data, cache_dir_of(cfg)));
  const std::string stem = artifact_stem(cfg.data, cfg.variant, "preprocess", cfg.seed);
  const fs::path dir(cfg.out);
  write_dataset(ds, (dir / (stem + ".data")).string());
  write_text(dir / (stem + "_manifest.json"), manifest_json(cfg).dump(2) + "\n");
  std::string counts;
  const auto c = ds.class_counts();
  for (std::size_t i = 0; i < c.size(); ++i)
    counts += fmt::format("{}{}={}", i ? " " : "", ds.schema.class_labels[i], c[i]);
  out << fmt::format("preprocess {} {}: {} instances, {} attributes; {}\n", cfg.data, cfg.variant, ds.size(),
                     ds.schema.size(), counts);
  return exit_ok;
}

int cmd_rank(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = apply_variant(resolve_dataset(cfg.data, cache_dir_of(cfg)), variant_of(cfg));
  const auto ranking = oner_rank(ds);
  std::string csv = "rank,attribute,name,accuracy\n";
  out << fmt::format("{:>4}  {:>4}  {:<28} {}\n", "rank", "attr", "name", "accuracy");
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& r = ranking[i];
    const std::string& name = ds.schema.attributes[r.attribute - 1].name;
    out << fmt::format("{:>4}  {:>4}  {:<28} {:.4f}\n", i + 1, r.attribute, name, r.accuracy);
    csv += fmt::format("{},{},{},{:.10g}\n", i + 1, r.attribute, name, r.accuracy);
  }
  const std::string stem = artifact_stem(cfg.data, cfg.variant, "oner", cfg.seed);
  write_text(fs::path(cfg.out) / (stem + "_rank.csv"), csv);
  return exit_ok;
}

int cmd_batch(const RunConfig& cfg, std::ostream& out) {
  const Algorithm algo = algorithm_of(cfg.algo, false);
  if (cfg.folds < 2) throw UsageError("--folds must be >= 2");
  const Dataset ds = prepared_dataset(cfg, resolve_dataset(cfg.data, cache_dir_of(cfg)));
  const auto t0 = std::chrono::steady_clock::now();
  const CvResult cv = cross_validate(ds, batch_factory(algo, learner_params(cfg)), cfg.folds, cfg.seed);
  const double runtime = seconds_since(t0);

  RunSummary s{cfg.data, cfg.variant, cfg.algo, batch_params(cfg, algo), cv.accuracy, cv.error, runtime, {}, {}};
  const std::string stem = artifact_stem(cfg.data, cfg.variant, cfg.algo, cfg.seed);
  const fs::path dir(cfg.out);
  write_text(dir / (stem + "_confusion.csv"), confusion_csv(cv.confusion));
  write_text(dir / (stem + "_summary.json"), summary_json(s).dump(2) + "\n");
  write_text(dir / (stem + "_manifest.json"), manifest_json(cfg).dump(2) + "\n");
  out << fmt::format("batch {} {} {}: accuracy {:.2f}% error {:.2f}% ({} of {} correct, {} folds, {:.1f} s)\n", cfg.data,
                     cfg.variant, cfg.algo, 100.0 * cv.accuracy, 100.0 * cv.error, cv.confusion.trace(),
                     cv.confusion.total(), cfg.folds, runtime);
  return exit_ok;
}

int cmd_stream(const RunConfig& cfg, std::ostream& out) {
  const auto names = split_list(cfg.algo);
  if (names.empty()) throw UsageError("--algo is empty");
  std::vector<Algorithm> algos;
  for (const auto& n : names) algos.push_back(algorithm_of(n, true));
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw UsageError("--alpha must lie in (0, 1]");

  const Dataset ds = prepared_dataset(cfg, resolve_dataset(cfg.data, cache_dir_of(cfg)));
  const fs::path dir(cfg.out);
  const LearnerParams params = learner_params(cfg);
  std::vector<PrequentialTrace> traces;
  traces.reserve(algos.size());
  for (std::size_t i = 0; i < algos.size(); ++i) {
    const Dataset stream = prepare_stream(ds, algos[i], params);
    auto model = stream_factory(algos[i], stream.schema, params)();
    const auto t0 = std::chrono::steady_clock::now();
    traces.push_back(prequential_run(stream, *model, cfg.alpha));
    const double runtime = seconds_since(t0);
    const PrequentialTrace& trace = traces.back();

    RunSummary s{cfg.data, cfg.variant, names[i], stream_params(cfg, algos[i]), trace.cumulative_accuracy(),
                 1.0 - trace.cumulative_accuracy(), runtime,
                 annotate_drifts(trace, {cfg.drop_threshold, cfg.drift_window}), trace.mean_faded_accuracy()};
    const std::string stem = artifact_stem(cfg.data, cfg.variant, names[i], cfg.seed);
    write_text(dir / (stem + "_trace.csv"), trace_csv(trace, cfg.every));
    write_text(dir / (stem + "_confusion.csv"), confusion_csv(trace.confusion));
    write_text(dir / (stem + "_summary.json"), summary_json(s).dump(2) + "\n");
    write_text(dir / (stem + "_curve.svg"), svg_curve({{names[i], &trace}}, cfg.every, stem));
    std::string drifts;
    for (std::size_t d : s.drift_indices) drifts += fmt::format("{}{}", drifts.empty() ? "" : ",", d);
    out << fmt::format("stream {} {} {}: accuracy {:.2f}% mean faded {:.2f}% drifts [{}] ({:.1f} s)\n", cfg.data,
                       cfg.variant, names[i], 100.0 * s.accuracy, 100.0 * trace.mean_faded_accuracy(), drifts, runtime);
  }
  const std::string stem =
      artifact_stem(cfg.data, cfg.variant, algos.size() == 1 ? names[0] : std::string("compare"), cfg.seed);
  if (algos.size() > 1) {
    std::vector<NamedTrace> named;
    for (std::size_t i = 0; i < algos.size(); ++i) named.push_back({names[i], &traces[i]});
    write_text(dir / (stem + "_traces.csv"), combined_trace_csv(named, cfg.every));
    write_text(dir / (stem + "_curves.svg"), svg_curve(named, cfg.every, stem));
  }
  write_text(dir / (stem + "_manifest.json"), manifest_json(cfg).dump(2) + "\n");
  return exit_ok;
}

/// Reads a trace CSV written by `stream` back into a trace.
PrequentialTrace read_trace_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::string line;
  std::getline(in, line);
  if (line.rfind("index,correct,faded_accuracy,cumulative_accuracy", 0) != 0)
    throw DataError(fmt::format("{}: not a trace CSV", path.string()));
  PrequentialTrace t;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRecord r;
    char c1, c2, c3;
    std::istringstream ss(line);
    if (!(ss >> r.index >> c1 >> r.correct >> c2 >> r.faded_accuracy >> c3 >> r.cumulative_accuracy) || c1 != ',' ||
        c2 != ',' || c3 != ',')
      throw ParseError(fmt::format("{}: malformed trace row", path.string()), line_no, 0);
    t.records.push_back(r);
  }
  return t;
}

int cmd_report(const RunConfig& cfg, const std::vector<std::string>& inputs, std::ostream& out) {
  if (inputs.empty()) throw UsageError("report needs at least one --in trace CSV");
  std::vector<PrequentialTrace> traces;
  std::vector<std::string> names;
  for (const auto& in : inputs) {
    traces.push_back(read_trace_csv(in));
    std::string name = fs::path(in).stem().string();
    if (name.size() > 6 && name.ends_with("_trace")) name.resize(name.size() - 6);
    names.push_back(name);
  }
  std::vector<NamedTrace> named;
  for (std::size_t i = 0; i < traces.size(); ++i) named.push_back({names[i], &traces[i]});
  const fs::path dir(cfg.out);
  write_text(dir / "report_traces.csv", combined_trace_csv(named, 1));
  write_text(dir / "report_curves.svg", svg_curve(named, 1, "faded accuracy"));
  out << fmt::format("report: {} traces -> {}\n", traces.size(), (dir / "report_curves.svg").string());
  return exit_ok;
}

} // namespace

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{{"command", command},
                        {"data", data},
                        {"variant", variant},
                        {"attrs", attrs},
                        {"algo", algo},
                        {"k", k},
                        {"folds", folds},
                        {"alpha", alpha},
                        {"seed", seed},
                        {"out", out},
                        {"sample", sample},
                        {"every", every},
                        {"drop_threshold", drop_threshold},
                        {"drift_window", drift_window},
                        {"window", window},
                        {"members", members}};
}

Dataset resolve_dataset(const std::string& data, const std::string& cache_dir) {
  if (const auto src = known_source(data)) {
    const fs::path path = fs::path(cache_dir) / src->file_name;
    if (!fs::exists(path))
      throw DataError(fmt::format("{} is not in the cache ({}); run `fetch --data {}` first", data, path.string(), data));
    return load_dataset(path.string(), src->schema);
  }
  if (!fs::exists(data)) throw DataError(fmt::format("no such dataset file: {}", data));
  AttributeSchema schema = kdd_schema();
  try {
    return load_dataset(data, schema);
  } catch (const ParseError& e) {
    if (std::string(e.what()).find(fmt::format("found {}", schema.expected_fields() + 1)) == std::string::npos) throw;
  }
  schema.ignored_trailing_fields = 1;
  return load_dataset(data, schema);
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intrusion-detection benchmark: batch cross-validation and prequential stream evaluation", "nidsbench"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> inputs;

  auto add_data = [&](CLI::App* c) {
    c->add_option("--data", cfg.data, "kdd99-10, nsl-kdd or a file path")->capture_default_str();
    c->add_option("--cache", cfg.cache, "Cache directory (default $NIDSBENCH_CACHE or ~/.cache/nidsbench)");
  };
  auto add_common = [&](CLI::App* c) {
    add_data(c);
    c->add_option("--variant", cfg.variant, "v1 (5 classes), v2 (normal/attack) or v3 (23 classes)")
        ->capture_default_str();
    c->add_option("--attrs", cfg.attrs, "selected, all, or 1-based list such as 1,5,9")->capture_default_str();
    c->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    c->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  };

  auto* fetch = app.add_subcommand("fetch", "Download a dataset into the cache and verify its SHA-256");
  add_data(fetch);
  fetch->add_option("--sha256", cfg.sha256, "Expected SHA-256 of the file");
  fetch->add_option("--url", cfg.url, "Override the download URL");

  auto* pre = app.add_subcommand("preprocess", "Relabel and select attributes; write the result");
  add_common(pre);

  auto* rank = app.add_subcommand("rank", "Rank attributes by one-rule accuracy");
  add_data(rank);
  rank->add_option("--variant", cfg.variant, "Class variant")->capture_default_str();
  rank->add_option("--out", cfg.out, "Output directory")->capture_default_str();

  auto* batch = app.add_subcommand("batch", "Stratified cross-validation of a batch learner");
  add_common(batch);
  batch->add_option("--algo", cfg.algo, "nb, j48, knn, mlp or svm")->capture_default_str();
  batch->add_option("--k", cfg.k, "Neighbours for knn")->capture_default_str();
  batch->add_option("--folds", cfg.folds, "Fold count")->capture_default_str();
  batch->add_option("--sample", cfg.sample, "knn training subsample per fold (0 = all)")->capture_default_str();

  auto* stream = app.add_subcommand("stream", "Prequential evaluation of stream learners");
  add_common(stream);
  stream->add_option("--algo", cfg.algo, "snb, ht, wknn or ozaboost; comma list to compare (default ht)");
  stream->add_option("--alpha", cfg.alpha, "Fading factor")->capture_default_str();
  stream->add_option("--k", cfg.k, "Neighbours for wknn")->capture_default_str();
  stream->add_option("--window", cfg.window, "wknn window size")->capture_default_str();
  stream->add_option("--members", cfg.members, "ozaboost ensemble size")->capture_default_str();
  stream->add_option("--every", cfg.every, "Keep every n-th trace row in CSV/SVG output")->capture_default_str();
  stream->add_option("--drop-threshold", cfg.drop_threshold, "Drift annotation drop")->capture_default_str();
  stream->add_option("--drift-window", cfg.drift_window, "Drift annotation window")->capture_default_str();

  auto* report = app.add_subcommand("report", "Overlay trace CSVs into one CSV and one SVG chart");
  report->add_option("--in", inputs, "Trace CSV written by `stream`")->required();
  report->add_option("--out", cfg.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return exit_usage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (*stream && stream->count("--algo") == 0) cfg.algo = "ht";
    if (!*fetch && !*report) variant_of(cfg);
    if (*fetch) return cmd_fetch(cfg, out);
    if (*pre) return cmd_preprocess(cfg, out);
    if (*rank) return cmd_rank(cfg, out);
    if (*batch) return cmd_batch(cfg, out);
    if (*stream) return cmd_stream(cfg, out);
    if (*report) return cmd_report(cfg, inputs, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const IntegrityError& e) {
    err << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_runtime;
  }
  return exit_usage;
}

} // namespace nidsbench
