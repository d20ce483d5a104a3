#pragma once

// Finite-level approximations of the Schlichting completion (G, K).
//
// K is the closure of the image of Lambda in Sym(Gamma/Lambda) for the
// topology of pointwise convergence, i.e. the inverse limit of the finite
// groups K_R generated by Lambda acting on the balls B(Lambda, R). Balls are
// Lambda-invariant but not Gamma-invariant, so only K is approximated.

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heckepair/coset_space.hpp"
#include "heckepair/perm_group.hpp"

namespace heckepair {

class FiniteLevelCompletion {
 public:
  // generators[j] permutes positions 0..carrier.size()-1 of the carrier and
  // is the action of the j-th Lambda generator.
  FiniteLevelCompletion(int level, std::vector<CosetId> carrier, std::vector<std::string> carrier_keys,
                        std::vector<Permutation> generators);

  int level() const noexcept { return level_; }
  const std::vector<CosetId>& carrier() const noexcept { return carrier_; }
  const std::vector<std::string>& carrier_keys() const noexcept { return keys_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }

  // |K_R|, computed once on first use.
  const Integer& order() const;

 private:
  struct OrderMemo {
    std::once_flag once;
    Integer value;
  };

  int level_;
  std::vector<CosetId> carrier_;
  std::vector<std::string> keys_;
  std::vector<Permutation> generators_;
  std::shared_ptr<OrderMemo> memo_ = std::make_shared<OrderMemo>();
};

// Permutations induced by the Lambda generators on B(Lambda, level), with the
// carrier listed in table order (breadth-first discovery order).
FiniteLevelCompletion level_action(const BallTable& table, int level);

inline Integer level_order(const FiniteLevelCompletion& flc) { return flc.order(); }

// True iff restricting hi's generator permutations to lo's carrier gives
// exactly lo's generators. Throws InvalidInput on a carrier mismatch.
bool restriction_check(const FiniteLevelCompletion& hi, const FiniteLevelCompletion& lo);

struct CoreProbe {
  GroupElement element;
  std::string label;
  // Least level at which the element moves a coset; empty means it acts
  // trivially on B(Lambda, max_level). Membership in the core is never claimed.
  std::optional<int> nontrivial_at;
};

struct CorePolicyReport {
  int max_level = 0;
  std::vector<CoreProbe> probes;
};

// Every probed element must lie in Lambda.
CorePolicyReport core_probe(const BallTable& table, std::span<const GroupElement> elements, int level);

// Completion named in the literature for a recognized parameter pattern.
std::optional<std::string> known_completion(const PairPresentation& pres);

}  // namespace heckepair
