#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "heckepair/cache.hpp"
#include "heckepair/config.hpp"
#include "heckepair/error.hpp"

using namespace heckepair;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("heckepair-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string table_text(const BallTable& t) {
  std::ostringstream out;
  write_ball_table(t, out);
  return out.str();
}

std::vector<fs::path> files_in(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config("# comment\nfamily = sl2_s_integers\nprimes = 3, 2\n\nmax_ball=1000\ntol = 1e-7\n");
  CHECK(cfg.family == Family::sl2_s_integers);
  CHECK(cfg.params.primes == std::vector<int>{3, 2});
  CHECK(cfg.budgets.max_ball == 1000);
  CHECK(cfg.tol == 1e-7);
  CHECK(cfg.presentation().family() == Family::sl2_s_integers);

  const auto bs = parse_config("family = baumslag_solitar\nm = 2\nn = 3\n");
  CHECK(bs.params.m == 2);
  CHECK(bs.params.n == 3);
  CHECK(bs.presentation().describe() == make_baumslag_solitar_pair(2, 3).describe());

  const auto lamp = parse_config("family = lamplighter\nlamp_order = 3\nlamp_window = 5\n");
  CHECK(lamp.params.lamp_order == 3);
  CHECK(lamp.params.lamp_window == 5);
}

TEST_CASE("config errors") {
  const char* bad[] = {
      "primes = 2\n",                                      // no family
      "family = sl3\n",                                    // unknown family
      "family = free2\nfoo = 1\n",                         // unknown key
      "family = free2\nfamily = free2\n",                  // duplicate
      "family = sl2_s_integers\n",                         // empty primes
      "family = sl2_s_integers\nprimes = 4\n",             // not prime
      "family = sl2_s_integers\nprimes = 2 2\n",           // repeated
      "family = baumslag_solitar\nm = 0\nn = 3\n",         // m < 1
      "family = baumslag_solitar\nm = x\nn = 3\n",         // not a number
      "family = lamplighter\nlamp_order = 1\n",            // trivial lamps
      "family = lamplighter\nlamp_window = 0\n",           // empty window
      "family = free2\nmax_ball = 0\n",                    // budget
      "family = free2\ntol = -1\n",                        // tolerance
      "family = free2\njust some words\n",                 // no '='
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config(text), InvalidInput);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/path.conf"), InvalidInput);
}

TEST_CASE("config hash") {
  const auto a = parse_config("family = baumslag_solitar\nm = 2\nn = 3\n");
  const auto b = parse_config("# same pair\nn=3\nfamily=baumslag_solitar\nm=2\n");
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != parse_config("family = baumslag_solitar\nm = 3\nn = 2\n").hash());
  CHECK(a.hash() != parse_config("family = baumslag_solitar\nm = 2\nn = 3\nmax_orbit = 5\n").hash());
  // keys of other families do not enter the canonical text
  CHECK(a.canonical_text().find("primes") == std::string::npos);
  // hash of a fixed text is pinned: FNV-1a 64 of the canonical form
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : a.canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  CHECK(a.hash() == h);
  const auto loaded = load_config(std::string(HECKEPAIR_SOURCE_DIR) + "/configs/bs_2_3.conf");
  CHECK(loaded.hash() == a.hash());
}

TEST_CASE("cache hit and miss") {
  TempDir dir;
  const auto cfg = parse_config("family = baumslag_solitar\nm = 2\nn = 3\n");
  const auto fresh = expand_ball(cfg.presentation(), 3);
  const auto first = cached_expand_ball(dir.path, cfg, 3);
  CHECK(table_text(first) == table_text(fresh));
  const auto path = cache_path(dir.path, cfg, 3);
  REQUIRE(fs::exists(path));
  CHECK(files_in(dir.path).size() == 1);

  // a second call reads the file back
  const auto second = cached_expand_ball(dir.path, cfg, 3);
  CHECK(table_text(second) == table_text(fresh));

  // a different config gets a different file
  const auto other = parse_config("family = baumslag_solitar\nm = 1\nn = 1\n");
  cached_expand_ball(dir.path, other, 3);
  CHECK(cache_path(dir.path, other, 3) != path);
  CHECK(files_in(dir.path).size() == 2);

  // header checks
  std::ifstream in(path);
  CacheRecord rec{cfg.hash(), 3};
  CHECK(read_cache_record(in, rec, cfg.presentation()).has_value());
  for (const CacheRecord wrong : {CacheRecord{cfg.hash() ^ 1, 3}, CacheRecord{cfg.hash(), 2},
                                  CacheRecord{cfg.hash(), 3, rec.version + 1}}) {
    std::ifstream again(path);
    CHECK_FALSE(read_cache_record(again, wrong, cfg.presentation()).has_value());
  }
}

TEST_CASE("stale or corrupt cache files are rebuilt") {
  TempDir dir;
  const auto cfg = parse_config("family = lamplighter\nlamp_order = 2\nlamp_window = 8\n");
  const auto expect = table_text(expand_ball(cfg.presentation(), 3));
  const auto path = cache_path(dir.path, cfg, 3);
  {
    std::ofstream out(path);
    out << "heckepair-cache 0\nconfig 0000000000000000\nradius 3\n";
  }
  CHECK(table_text(cached_expand_ball(dir.path, cfg, 3)) == expect);
  {
    std::ofstream out(path);
    CacheRecord rec{cfg.hash(), 3};
    out << "heckepair-cache " << rec.version << "\nconfig ";
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << cfg.hash() << std::dec << "\nradius 3\ngarbage\n";
  }
  CHECK(table_text(cached_expand_ball(dir.path, cfg, 3)) == expect);
  // rebuilt file is valid again
  std::ifstream in(path);
  CHECK(read_cache_record(in, CacheRecord{cfg.hash(), 3}, cfg.presentation()).has_value());
  for (const auto& p : files_in(dir.path)) CHECK(p.extension() == ".balltable");
}

TEST_CASE("unsaturated tables are not cached") {
  TempDir dir;
  const auto cfg = parse_config("family = free2\n");
  const auto t = cached_expand_ball(dir.path, cfg, 2);
  CHECK_FALSE(t.saturated());
  CHECK(files_in(dir.path).empty());
}
