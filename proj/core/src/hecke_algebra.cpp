#include "heckepair/hecke_algebra.hpp"

#include <ostream>
#include <stdexcept>

#include "heckepair/error.hpp"

namespace heckepair {

namespace {

const DoubleCoset& orbit_at(const BallTable& table, std::size_t id) {
  if (id >= table.orbits().size()) throw OutOfRange("double coset id out of range", -1);
  return table.orbits()[id];
}

std::vector<GroupElement> member_reps(const DoubleCoset& a, const BallTable& table) {
  std::vector<GroupElement> reps;
  reps.reserve(a.members.size());
  for (CosetId c : a.members) reps.push_back(table.rep(c));
  return reps;
}

}  // namespace

HeckeElement basis_element(const DoubleCoset& a, const BallTable& table) {
  HeckeElement x;
  x.radius = table.radius();
  x.terms.emplace(a.id, 1);
  return x;
}

HeckeElement convolve_representatives(std::span<const GroupElement> a_reps, std::span<const GroupElement> b_reps,
                                      const BallTable& table) {
  HeckeElement out;
  out.radius = table.radius();
  std::map<std::size_t, Integer> landed;  // all pairs per double coset
  for (const auto& x : a_reps) {
    for (const auto& y : b_reps) {
      const auto c = table.find(multiply(x, y));
      const auto o = c ? table.orbit_of(*c) : std::nullopt;
      if (!o) {
        int needed = -1;
        const auto ca = table.find(x), cb = table.find(y);
        if (ca && cb && table.depth(*ca) && table.depth(*cb)) needed = *table.depth(*ca) + *table.depth(*cb);
        throw OutOfRange("convolve: product coset outside table; needs radius " +
                             (needed >= 0 ? std::to_string(needed) : std::string("unknown")),
                         needed);
      }
      landed[*o] += 1;
      if (*c == table.orbits()[*o].rep_coset) out.terms[*o] += 1;
    }
  }
  // Left multiplication by Lambda permutes the cosets of d transitively and
  // preserves the count, so every coset of d receives the same number of pairs.
  for (const auto& [d, total] : landed) {
    const Integer expected = out.terms[d] * table.orbits()[d].degree;
    if (total != expected) throw std::logic_error("convolve: pair counts not uniform over a double coset");
  }
  return out;
}

HeckeElement convolve(const DoubleCoset& a, const DoubleCoset& b, const BallTable& table) {
  const auto xs = member_reps(a, table);
  const auto ys = member_reps(b, table);
  return convolve_representatives(xs, ys, table);
}

HeckeElement multiply(const HeckeElement& x, const HeckeElement& y, const BallTable& table) {
  HeckeElement out;
  out.radius = table.radius();
  for (const auto& [a, ca] : x.terms) {
    for (const auto& [b, cb] : y.terms) {
      const HeckeElement ab = convolve(orbit_at(table, a), orbit_at(table, b), table);
      for (const auto& [d, c] : ab.terms) out.terms[d] += ca * cb * c;
    }
  }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second == 0; });
  return out;
}

DoubleCoset involution(const DoubleCoset& a, const BallTable& table) {
  const auto c = table.find(invert(a.rep));
  const auto o = c ? table.orbit_of(*c) : std::nullopt;
  if (!o) throw OutOfRange("involution: inverse double coset outside table", a.depth);
  return table.orbits()[*o];
}

HeckeElement involution(const HeckeElement& x, const BallTable& table) {
  HeckeElement out;
  out.radius = x.radius;
  for (const auto& [a, c] : x.terms) out.terms[involution(orbit_at(table, a), table).id] += c;
  return out;
}

Integer augmentation(const HeckeElement& x, const BallTable& table) {
  Integer sum = 0;
  for (const auto& [a, c] : x.terms) sum += c * orbit_at(table, a).degree;
  return sum;
}

void write_multiplication_table_csv(const BallTable& table, int depth, std::ostream& out) {
  const auto orbits = double_cosets_up_to(table, depth);
  out << "a,b,d,coeff\n";
  for (const auto& a : orbits)
    for (const auto& b : orbits)
      for (const auto& [d, c] : convolve(a, b, table).terms) out << a.id << "," << b.id << "," << d << "," << c << "\n";
}

}  // namespace heckepair
