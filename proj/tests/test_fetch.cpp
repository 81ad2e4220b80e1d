#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nidsbench/fetch.hpp"

using namespace nidsbench;
namespace fs = std::filesystem;

namespace {

struct FakeServer {
  std::string body;
  int calls = 0;

  Downloader downloader() {
    return [this](const std::string&, const fs::path& dest) {
      ++calls;
      std::ofstream(dest, std::ios::binary) << body;
    };
  }
};

} // namespace

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Fetch, DownloadsVerifiesAndCaches) {
  const auto dir = fixtures::temp_dir("fetch_ok");
  FakeServer server{"payload"};
  const std::string digest = sha256_hex("payload");
  const auto path = fetch_dataset("f.txt", "http://example.invalid/f", digest, dir, server.downloader());
  EXPECT_EQ(path, dir / "f.txt");
  EXPECT_EQ(sha256_file(path), digest);
  EXPECT_EQ(server.calls, 1);

  fetch_dataset("f.txt", "http://example.invalid/f", digest, dir, server.downloader());
  EXPECT_EQ(server.calls, 1) << "cache hit must not download";
}

TEST(Fetch, DigestMismatchLeavesNothingBehind) {
  const auto dir = fixtures::temp_dir("fetch_bad");
  FakeServer server{"tampered"};
  EXPECT_THROW(fetch_dataset("f.txt", "u", sha256_hex("payload"), dir, server.downloader()), IntegrityError);
  EXPECT_FALSE(fs::exists(dir / "f.txt"));
  EXPECT_FALSE(fs::exists(dir / "f.txt.part"));
}

TEST(Fetch, StaleCacheIsReplaced) {
  const auto dir = fixtures::temp_dir("fetch_stale");
  std::ofstream(dir / "f.txt") << "old";
  FakeServer server{"payload"};
  fetch_dataset("f.txt", "u", sha256_hex("payload"), dir, server.downloader());
  EXPECT_EQ(server.calls, 1);
  EXPECT_EQ(sha256_file(dir / "f.txt"), sha256_hex("payload"));
}

TEST(Fetch, RejectsMalformedDigest) {
  const auto dir = fixtures::temp_dir("fetch_digest");
  FakeServer server{"x"};
  EXPECT_THROW(fetch_dataset("f.txt", "u", "abc", dir, server.downloader()), std::invalid_argument);
  EXPECT_EQ(server.calls, 0);
}

TEST(Fetch, DownloaderFailurePropagates) {
  const auto dir = fixtures::temp_dir("fetch_net");
  Downloader broken = [](const std::string&, const fs::path&) { throw NetworkError("unreachable"); };
  EXPECT_THROW(fetch_dataset("f.txt", "u", sha256_hex("x"), dir, broken), NetworkError);
  EXPECT_FALSE(fs::exists(dir / "f.txt.part"));
}

TEST(Sources, KnownNames) {
  EXPECT_TRUE(known_source("kdd99-10"));
  const auto nsl = known_source("nsl-kdd");
  ASSERT_TRUE(nsl);
  EXPECT_EQ(nsl->schema.ignored_trailing_fields, 1u);
  EXPECT_FALSE(known_source("kdd99-full"));
}
