#include "heckepair/cache.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "heckepair/error.hpp"

namespace heckepair {

namespace {

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, const PairConfig& cfg, int radius) {
  return dir / (hex(cfg.hash()) + "-r" + std::to_string(radius) + ".balltable");
}

void write_cache_record(const CacheRecord& record, const BallTable& table, std::ostream& out) {
  out << "heckepair-cache " << record.version << "\n"
      << "config " << hex(record.config_hash) << "\n"
      << "radius " << record.radius << "\n";
  write_ball_table(table, out);
}

std::optional<BallTable> read_cache_record(std::istream& in, const CacheRecord& expected,
                                           const PairPresentation& pres) {
  std::string line;
  const auto expect = [&](const std::string& want) { return std::getline(in, line) && line == want; };
  if (!expect("heckepair-cache " + std::to_string(expected.version))) return std::nullopt;
  if (!expect("config " + hex(expected.config_hash))) return std::nullopt;
  if (!expect("radius " + std::to_string(expected.radius))) return std::nullopt;
  BallTable table = read_ball_table(in, pres);
  if (table.radius() != expected.radius) return std::nullopt;
  return table;
}

BallTable cached_expand_ball(const std::filesystem::path& dir, const PairConfig& cfg, int radius) {
  const PairPresentation pres = cfg.presentation();
  const CacheRecord record{cfg.hash(), radius};
  const auto path = cache_path(dir, cfg, radius);

  if (std::ifstream in(path, std::ios::binary); in) {
    try {
      if (auto table = read_cache_record(in, record, pres)) return std::move(*table);
    } catch (const InvalidInput&) {
      // corrupt file: rebuild and overwrite
    }
  }

  BallTable table = expand_ball(pres, radius);
  if (!table.saturated()) return table;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create cache directory " + dir.string());
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write cache file " + tmp.string());
    write_cache_record(record, table, out);
    out.flush();
    if (!out) throw InvalidInput("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInput("cannot install cache file " + path.string());
  }
  return table;
}

}  // namespace heckepair
