#pragma once

// Flat key=value pair configuration. Lines starting with # are comments.
//
//   family = sl2_s_integers
//   primes = 2 3
//   max_ball = 200000
//
// Keys: family, primes, m, n, lamp_order, lamp_window, max_ball, max_orbit,
// max_radius, tol.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "heckepair/presentation.hpp"

namespace heckepair {

struct PairConfig {
  Family family = Family::sl2_s_integers;
  FamilyParams params;
  Budgets budgets;
  double tol = 1e-9;

  // Throws InvalidInput on parameters the family does not accept.
  void validate() const;
  PairPresentation presentation() const;

  // Fixed key order, only the keys relevant to the family.
  std::string canonical_text() const;
  // FNV-1a 64 of canonical_text().
  std::uint64_t hash() const;
};

PairConfig parse_config(std::string_view text);
PairConfig load_config(const std::string& path);

}  // namespace heckepair
