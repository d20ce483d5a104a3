#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heckepair/group.hpp"

namespace heckepair {

enum class Family { sl2_s_integers, baumslag_solitar, lamplighter, free2 };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

struct FamilyParams {
  std::vector<int> primes;  // sl2_s_integers
  int m = 1;                // baumslag_solitar
  int n = 1;
  int lamp_order = 2;   // lamplighter, F = Z/lamp_order
  int lamp_window = 8;  // lamplighter, Lambda generators delta_j for 0 <= j < window
};

struct Budgets {
  std::size_t max_ball = 200000;
  std::size_t max_orbit = 10000;
  int max_radius = 8;
};

struct Generator {
  std::string name;  // a word in the Gamma generators, e.g. "D2^-1" or "t^2 x t^-2"
  GroupElement element;
};

// A group family instance together with the subgroup Lambda.
//
//   sl2_s_integers    Gamma = SL(2, Z[1/S]),  Lambda = SL(2, Z)
//   baumslag_solitar  Gamma = BS(m, n),       Lambda = <b>
//   lamplighter       Gamma = Z/q wr Z,       Lambda = sum over N of Z/q
//   free2             Gamma = F(a, b),        Lambda = <a>   (not a Hecke pair)
//
// Lambda is infinitely generated for the lamplighter. Its generating set is
// truncated to the lamps 0 .. window-1, which generates the image of Lambda
// on every coset (f, k).Lambda with shift k <= window.
class PairPresentation {
 public:
  PairPresentation(Family family, FamilyParams params, Budgets budgets = {});

  Family family() const noexcept { return family_; }
  const FamilyParams& params() const noexcept { return params_; }
  const Budgets& budgets() const noexcept { return budgets_; }
  const GroupElement& identity() const noexcept { return identity_; }

  // Symmetric generating set of Gamma, each with unit length.
  const std::vector<Generator>& gamma_generators() const noexcept { return gamma_; }
  // Symmetric generating set of Lambda.
  const std::vector<Generator>& lambda_generators() const noexcept { return lambda_; }

  bool in_lambda(const GroupElement& g) const;

  // Canonical key of the left coset g.Lambda: key(g) == key(h) iff g^-1 h is in Lambda.
  std::string coset_key(const GroupElement& g) const;

  // Parses "a b^-1 a b", "D2^2 T", "t^3 x t^-3". "e" is the identity.
  GroupElement parse_word(std::string_view word) const;

  // Same pair with the Gamma generators listed in another order.
  PairPresentation with_generator_order(const std::vector<std::size_t>& order) const;
  PairPresentation with_budgets(Budgets budgets) const;

  std::string describe() const;

 private:
  void validate() const;

  Family family_;
  FamilyParams params_;
  Budgets budgets_;
  GroupElement identity_;
  std::vector<Generator> gamma_;
  std::vector<Generator> lambda_;
  std::vector<Generator> base_names_;  // letters accepted by parse_word
};

PairPresentation make_sl2_pair(std::vector<int> primes, Budgets budgets = {});
PairPresentation make_baumslag_solitar_pair(int m, int n, Budgets budgets = {});
PairPresentation make_lamplighter_pair(int lamp_order = 2, int window = 8, Budgets budgets = {});
PairPresentation make_free2_pair(Budgets budgets = {});

inline bool in_lambda(const PairPresentation& pres, const GroupElement& g) { return pres.in_lambda(g); }

// Word length of g in the Gamma generators by bidirectional breadth-first
// search. Empty when more than `budget` elements would have to be visited.
std::optional<std::size_t> element_length(const PairPresentation& pres, const GroupElement& g,
                                          std::size_t budget);

bool is_prime(int p);

}  // namespace heckepair
