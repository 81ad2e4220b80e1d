#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nidsbench/dataset.hpp"

namespace nidsbench {

class IntegrityError : public std::runtime_error {
public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

class NetworkError : public std::runtime_error {
public:
  explicit NetworkError(const std::string& what) : std::runtime_error(what) {}
};

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

/// A named public dataset: where to get it, what to call it in the cache, and
/// how to read it.
struct DatasetSource {
  std::string name;
  std::string url;
  std::string file_name;
  AttributeSchema schema;
};

/// "kdd99-10" or "nsl-kdd"; nullopt for anything else.
std::optional<DatasetSource> known_source(std::string_view name);

/// Writes the body at `url` to `dest`; throws NetworkError on failure.
using Downloader = std::function<void(const std::string& url, const std::filesystem::path& dest)>;

/// libcurl GET following redirects.
void curl_download(const std::string& url, const std::filesystem::path& dest);

/// Cache directory from $NIDSBENCH_CACHE, else ~/.cache/nidsbench.
std::filesystem::path default_cache_dir();

/// Ensures `cache_dir/file_name` exists with SHA-256 `expected_digest`.
///
/// A cached copy with the right digest is returned untouched. Otherwise the
/// file is downloaded to a temporary name, verified, and renamed into place;
/// on a digest mismatch the download (and any stale cached copy) is deleted
/// and IntegrityError is thrown.
std::filesystem::path fetch_dataset(const std::string& file_name, const std::string& url,
                                    const std::string& expected_digest,
                                    const std::filesystem::path& cache_dir,
                                    const Downloader& download = curl_download);

} // namespace nidsbench
