#include "heckepair/schlichting.hpp"

#include <algorithm>
#include <unordered_map>

#include "heckepair/error.hpp"

namespace heckepair {

FiniteLevelCompletion::FiniteLevelCompletion(int level, std::vector<CosetId> carrier,
                                             std::vector<std::string> carrier_keys,
                                             std::vector<Permutation> generators)
    : level_(level), carrier_(std::move(carrier)), keys_(std::move(carrier_keys)), generators_(std::move(generators)) {
  if (carrier_.size() != keys_.size()) throw InvalidInput("FiniteLevelCompletion: carrier/key size mismatch");
  for (const auto& g : generators_)
    if (g.degree() != carrier_.size()) throw InvalidInput("FiniteLevelCompletion: permutation degree mismatch");
}

const Integer& FiniteLevelCompletion::order() const {
  std::call_once(memo_->once, [this] {
    memo_->value = StabilizerChain(generators_, carrier_.size()).order();
  });
  return memo_->value;
}

FiniteLevelCompletion level_action(const BallTable& table, int level) {
  if (level < 0) throw InvalidInput("level_action: level must be >= 0");
  if (level > table.radius())
    throw OutOfRange("level_action: level " + std::to_string(level) + " beyond table radius", level);
  const auto orbits = double_cosets_up_to(table, level);

  std::vector<CosetId> carrier;
  for (const auto& dc : orbits) carrier.insert(carrier.end(), dc.members.begin(), dc.members.end());
  std::sort(carrier.begin(), carrier.end());
  std::unordered_map<CosetId, std::uint32_t> position;
  std::vector<std::string> keys;
  for (std::uint32_t p = 0; p < carrier.size(); ++p) {
    position.emplace(carrier[p], p);
    keys.push_back(table.key(carrier[p]));
  }

  std::vector<Permutation> generators;
  const std::size_t ngen = table.presentation().lambda_generators().size();
  for (std::size_t j = 0; j < ngen; ++j) {
    std::vector<std::uint32_t> image(carrier.size());
    for (std::uint32_t p = 0; p < carrier.size(); ++p) {
      const auto target = table.lambda_edge(carrier[p], j);
      auto it = target ? position.find(*target) : position.end();
      if (it == position.end())
        throw OutOfRange("level_action: image of coset " + std::to_string(carrier[p]) + " not resolvable", level);
      image[p] = it->second;
    }
    generators.emplace_back(std::move(image));
  }
  return FiniteLevelCompletion(level, std::move(carrier), std::move(keys), std::move(generators));
}

bool restriction_check(const FiniteLevelCompletion& hi, const FiniteLevelCompletion& lo) {
  if (lo.level() > hi.level()) throw InvalidInput("restriction_check: lo level above hi level");
  if (lo.generators().size() != hi.generators().size())
    throw InvalidInput("restriction_check: generator count mismatch");
  std::unordered_map<std::string, std::uint32_t> hi_position;
  for (std::uint32_t p = 0; p < hi.carrier_keys().size(); ++p) hi_position.emplace(hi.carrier_keys()[p], p);
  std::unordered_map<std::uint32_t, std::uint32_t> hi_to_lo;
  std::vector<std::uint32_t> lo_to_hi;
  for (std::uint32_t p = 0; p < lo.carrier_keys().size(); ++p) {
    auto it = hi_position.find(lo.carrier_keys()[p]);
    if (it == hi_position.end()) throw InvalidInput("restriction_check: lo carrier not contained in hi carrier");
    lo_to_hi.push_back(it->second);
    hi_to_lo.emplace(it->second, p);
  }
  for (std::size_t j = 0; j < lo.generators().size(); ++j) {
    const auto& g_hi = hi.generators()[j];
    const auto& g_lo = lo.generators()[j];
    for (std::uint32_t p = 0; p < lo_to_hi.size(); ++p) {
      auto it = hi_to_lo.find(g_hi(lo_to_hi[p]));
      if (it == hi_to_lo.end() || it->second != g_lo(p)) return false;
    }
  }
  return true;
}

CorePolicyReport core_probe(const BallTable& table, std::span<const GroupElement> elements, int level) {
  const auto& pres = table.presentation();
  if (level > table.radius())
    throw OutOfRange("core_probe: level " + std::to_string(level) + " beyond table radius", level);
  const auto orbits = double_cosets_up_to(table, level);
  CorePolicyReport report;
  report.max_level = level;
  for (const auto& g : elements) {
    if (!pres.in_lambda(g)) throw InvalidInput("core_probe: " + to_string(g) + " is not in Lambda");
    CoreProbe probe{g, to_string(g), std::nullopt};
    // Orbits come sorted by depth, so the first moved coset gives the least level.
    for (const auto& dc : orbits) {
      const bool moved = std::any_of(dc.members.begin(), dc.members.end(), [&](CosetId c) {
        return pres.coset_key(multiply(g, table.rep(c))) != table.key(c);
      });
      if (moved) {
        probe.nontrivial_at = dc.depth;
        break;
      }
    }
    report.probes.push_back(std::move(probe));
  }
  return report;
}

std::optional<std::string> known_completion(const PairPresentation& pres) {
  const auto& p = pres.params();
  switch (pres.family()) {
    case Family::sl2_s_integers:
      if (p.primes.size() == 1) return "PSL(2,Q_" + std::to_string(p.primes.front()) + ")";
      return std::nullopt;
    case Family::baumslag_solitar:
      // <b> is normal only in BS(1,1); then (G, K) = (Gamma/Lambda, 1).
      if (p.m == 1 && p.n == 1) return "Γ/Λ";
      return std::nullopt;
    case Family::lamplighter:
    case Family::free2:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace heckepair
