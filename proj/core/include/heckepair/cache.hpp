#pragma once

// On-disk ball-table cache. One file per (config hash, radius):
//
//   heckepair-cache <version>
//   config <16 hex digits>
//   radius <R>
//   <write_ball_table output>
//
// A file is used only when version and config hash match exactly.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "heckepair/config.hpp"
#include "heckepair/coset_space.hpp"

namespace heckepair {

inline constexpr int kCacheFormatVersion = 1;

struct CacheRecord {
  std::uint64_t config_hash = 0;
  int radius = 0;
  int version = kCacheFormatVersion * 1000 + kBallTableFormatVersion;
};

std::filesystem::path cache_path(const std::filesystem::path& dir, const PairConfig& cfg, int radius);

void write_cache_record(const CacheRecord& record, const BallTable& table, std::ostream& out);
// Empty when the header does not match `expected`.
std::optional<BallTable> read_cache_record(std::istream& in, const CacheRecord& expected, const PairPresentation& pres);

// Loads the table from dir when a matching record exists, otherwise expands
// it and stores it with write-then-rename. Only saturated tables are stored.
BallTable cached_expand_ball(const std::filesystem::path& dir, const PairConfig& cfg, int radius);

}  // namespace heckepair
