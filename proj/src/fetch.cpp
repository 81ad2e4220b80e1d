#include "nidsbench/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>

#include <curl/curl.h>
#include <fmt/format.h>
#include <openssl/evp.h>

namespace nidsbench {

namespace fs = std::filesystem;

namespace {

struct DigestContext {
  DigestContext() : ctx(EVP_MD_CTX_new()) {
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("cannot initialise SHA-256");
  }
  ~DigestContext() { EVP_MD_CTX_free(ctx); }
  DigestContext(const DigestContext&) = delete;
  DigestContext& operator=(const DigestContext&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx, data, n); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

  EVP_MD_CTX* ctx;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
  DigestContext ctx;
  ctx.update(bytes.data(), bytes.size());
  return ctx.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  DigestContext ctx;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    ctx.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return ctx.hex();
}

std::optional<DatasetSource> known_source(std::string_view name) {
  if (name == "kdd99-10") {
    return DatasetSource{"kdd99-10", "http://kdd.ics.uci.edu/databases/kddcup99/kddcup.data_10_percent.gz",
                         "kddcup.data_10_percent.gz", kdd_schema()};
  }
  if (name == "nsl-kdd") {
    auto schema = kdd_schema();
    schema.ignored_trailing_fields = 1;
    return DatasetSource{"nsl-kdd", "https://raw.githubusercontent.com/defcom17/NSL_KDD/master/KDDTrain%2B.txt",
                         "KDDTrain+.txt", std::move(schema)};
  }
  return std::nullopt;
}

namespace {

std::size_t write_body(char* ptr, std::size_t size, std::size_t nmemb, void* userdata) {
  auto* out = static_cast<std::ofstream*>(userdata);
  out->write(ptr, static_cast<std::streamsize>(size * nmemb));
  return *out ? size * nmemb : 0;
}

} // namespace

void curl_download(const std::string& url, const fs::path& dest) {
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", dest.string()));

  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) throw NetworkError("curl_easy_init failed");
  char errbuf[CURL_ERROR_SIZE] = {0};
  curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, write_body);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &out);
  curl_easy_setopt(curl.get(), CURLOPT_ERRORBUFFER, errbuf);
  CURLcode rc = curl_easy_perform(curl.get());
  out.close();
  if (rc != CURLE_OK)
    throw NetworkError(fmt::format("GET {} failed: {}", url, errbuf[0] ? errbuf : curl_easy_strerror(rc)));
}

fs::path default_cache_dir() {
  if (const char* env = std::getenv("NIDSBENCH_CACHE"); env != nullptr && *env != '\0') return env;
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
    return fs::path(home) / ".cache" / "nidsbench";
  return fs::temp_directory_path() / "nidsbench";
}

fs::path fetch_dataset(const std::string& file_name, const std::string& url, const std::string& expected_digest,
                       const fs::path& cache_dir, const Downloader& download) {
  const std::string want = lower(expected_digest);
  if (want.size() != 64 || !std::all_of(want.begin(), want.end(), [](char c) { return std::isxdigit(c); }))
    throw std::invalid_argument(fmt::format("'{}' is not a SHA-256 hex digest", expected_digest));

  fs::create_directories(cache_dir);
  const fs::path target = cache_dir / file_name;
  if (fs::exists(target)) {
    if (sha256_file(target) == want) return target;
    fs::remove(target);
  }

  const fs::path part = cache_dir / (file_name + ".part");
  try {
    download(url, part);
  } catch (...) {
    std::error_code ec;
    fs::remove(part, ec);
    throw;
  }
  const std::string got = sha256_file(part);
  if (got != want) {
    fs::remove(part);
    throw IntegrityError(fmt::format("digest mismatch for {}: expected {}, got {}", file_name, want, got));
  }
  fs::rename(part, target);
  return target;
}

} // namespace nidsbench
