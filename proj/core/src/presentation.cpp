#include "heckepair/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "heckepair/error.hpp"

namespace heckepair {

namespace {

struct Egcd {
  Integer g, u, v;  // u*x + v*y = g >= 0
};

Egcd extended_gcd(const Integer& x, const Integer& y) {
  Integer old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}


// Hermite normal form [[x, y], [0, z]] (x, z > 0, 0 <= y < x) of the column
// lattice g.Z^2. Two matrices of SL(2, Q) span the same lattice iff they
// differ by right multiplication with SL(2, Z).
std::string lattice_key(const MatrixElt& g) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  Integer scale = 1;
  for (const auto& e : g.entries) scale = boost::multiprecision::lcm(scale, denominator(e));
  std::array<Integer, 4> a;
  for (std::size_t i = 0; i < 4; ++i) a[i] = numerator(Rational(g.entries[i] * scale));
  // columns (a0, a2) and (a1, a3); clear the bottom-left entry
  const Egcd e = extended_gcd(a[2], a[3]);
  const Integer c = a[2] / e.g, d = a[3] / e.g;
  Integer x = d * a[0] - c * a[1];
  Integer y = e.u * a[0] + e.v * a[1];
  const Integer& z = e.g;
  if (x < 0) x = -x;
  y = floor_mod(y, x);
  std::ostringstream os;
  os << "L" << Rational(x, scale) << "," << Rational(y, scale) << "," << Rational(z, scale);
  return os.str();
}

std::string power_name(const std::string& base, int k) {
  if (k == 1) return base;
  return base + "^" + std::to_string(k);
}

GroupElement power(const GroupElement& g, long k) {
  GroupElement out = identity_like(g);
  const GroupElement step = k >= 0 ? g : invert(g);
  for (long i = 0; i < std::abs(k); ++i) out = multiply(out, step);
  return out;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::sl2_s_integers: return "sl2_s_integers";
    case Family::baumslag_solitar: return "baumslag_solitar";
    case Family::lamplighter: return "lamplighter";
    case Family::free2: return "free2";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (auto f : {Family::sl2_s_integers, Family::baumslag_solitar, Family::lamplighter, Family::free2})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PairPresentation::PairPresentation(Family family, FamilyParams params, Budgets budgets)
    : family_(family), params_(std::move(params)), budgets_(budgets), identity_(FreeElt{}) {
  auto add_symmetric = [](std::vector<Generator>& out, const std::string& name, const GroupElement& g) {
    out.push_back({name, g});
    GroupElement inv = invert(g);
    if (inv != g) out.push_back({power_name(name, -1), std::move(inv)});
  };

  switch (family_) {
    case Family::sl2_s_integers: {
      auto& primes = params_.primes;
      if (primes.empty()) throw InvalidInput("sl2_s_integers: prime set S must be nonempty");
      for (int p : primes)
        if (!is_prime(p)) throw InvalidInput("sl2_s_integers: " + std::to_string(p) + " is not prime");
      std::sort(primes.begin(), primes.end());
      if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
        throw InvalidInput("sl2_s_integers: repeated prime");
      identity_ = matrix::identity();
      const GroupElement t = matrix::make(1, 1, 0, 1);
      const GroupElement s = matrix::make(0, -1, 1, 0);
      base_names_ = {{"T", t}, {"S", s}};
      for (int p : primes) base_names_.push_back({"D" + std::to_string(p), matrix::make(p, 0, 0, Rational(1, p))});
      for (const auto& gen : base_names_) add_symmetric(gamma_, gen.name, gen.element);
      add_symmetric(lambda_, "T", t);
      add_symmetric(lambda_, "S", s);
      break;
    }
    case Family::baumslag_solitar: {
      if (params_.m < 1 || params_.n < 1) throw InvalidInput("baumslag_solitar: m and n must be >= 1");
      identity_ = bs::identity(params_.m, params_.n);
      const GroupElement a = bs::generator_a(params_.m, params_.n, 1);
      const GroupElement b = bs::generator_b(params_.m, params_.n, 1);
      base_names_ = {{"a", a}, {"b", b}};
      add_symmetric(gamma_, "a", a);
      add_symmetric(gamma_, "b", b);
      add_symmetric(lambda_, "b", b);
      break;
    }
    case Family::lamplighter: {
      if (params_.lamp_order < 2) throw InvalidInput("lamplighter: |F| must be >= 2");
      if (params_.lamp_window < 1) throw InvalidInput("lamplighter: window must be >= 1");
      const int q = params_.lamp_order;
      identity_ = WreathElt{q, {}, 0};
      const GroupElement t = WreathElt{q, {}, 1};
      const GroupElement x = WreathElt{q, {{0, 1}}, 0};
      base_names_ = {{"t", t}, {"x", x}};
      add_symmetric(gamma_, "t", t);
      add_symmetric(gamma_, "x", x);
      for (int j = 0; j < params_.lamp_window; ++j) {
        const GroupElement lamp = WreathElt{q, {{j, 1}}, 0};
        const std::string name = j == 0 ? "x" : "t" + (j == 1 ? std::string() : "^" + std::to_string(j)) + " x " +
                                                    power_name("t", -j);
        lambda_.push_back({name, lamp});
        GroupElement inv = invert(lamp);
        if (inv != lamp) {
          const std::string inv_name = j == 0 ? "x^-1"
                                              : "t" + (j == 1 ? std::string() : "^" + std::to_string(j)) +
                                                    " x^-1 " + power_name("t", -j);
          lambda_.push_back({inv_name, std::move(inv)});
        }
      }
      break;
    }
    case Family::free2: {
      identity_ = FreeElt{};
      const GroupElement a = FreeElt{{1}};
      const GroupElement b = FreeElt{{2}};
      base_names_ = {{"a", a}, {"b", b}};
      add_symmetric(gamma_, "a", a);
      add_symmetric(gamma_, "b", b);
      add_symmetric(lambda_, "a", a);
      break;
    }
  }
  validate();
}

void PairPresentation::validate() const {
  auto closed = [](const std::vector<Generator>& gens) {
    return std::all_of(gens.begin(), gens.end(), [&](const Generator& g) {
      const GroupElement inv = invert(g.element);
      return std::any_of(gens.begin(), gens.end(), [&](const Generator& h) { return h.element == inv; });
    });
  };
  for (const auto* gens : {&gamma_, &lambda_}) {
    if (!closed(*gens)) throw std::logic_error("generating set not closed under inversion");
    for (const auto& g : *gens)
      if (is_identity(g.element)) throw std::logic_error("identity listed as a generator");
  }
  for (const auto& g : lambda_)
    if (!in_lambda(g.element)) throw std::logic_error("Lambda generator " + g.name + " outside Lambda");
}

bool PairPresentation::in_lambda(const GroupElement& g) const {
  if (!same_family(g, identity_)) throw InvalidInput("in_lambda: element of another family");
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatrixElt>) {
          return std::all_of(x.entries.begin(), x.entries.end(),
                             [](const Rational& e) { return boost::multiprecision::denominator(e) == 1; });
        } else if constexpr (std::is_same_v<T, BsElt>) {
          return x.letters.empty();
        } else if constexpr (std::is_same_v<T, WreathElt>) {
          return x.shift == 0 && (x.lamps.empty() || x.lamps.begin()->first >= 0);
        } else {
          return std::all_of(x.letters.begin(), x.letters.end(), [](auto l) { return l == 1 || l == -1; });
        }
      },
      g);
}

std::string PairPresentation::coset_key(const GroupElement& g) const {
  if (!same_family(g, identity_)) throw InvalidInput("coset_key: element of another family");
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatrixElt>) {
          return lattice_key(x);
        } else if constexpr (std::is_same_v<T, BsElt>) {
          BsElt stripped = x;
          stripped.tail = 0;
          return "B" + serialize(stripped);
        } else if constexpr (std::is_same_v<T, WreathElt>) {
          WreathElt stripped{x.order, {}, x.shift};
          for (const auto& [pos, val] : x.lamps)
            if (pos < x.shift) stripped.lamps.emplace(pos, val);
          return "W" + serialize(stripped);
        } else {
          FreeElt stripped = x;
          while (!stripped.letters.empty() && std::abs(stripped.letters.back()) == 1) stripped.letters.pop_back();
          return "F" + serialize(stripped);
        }
      },
      g);
}

GroupElement PairPresentation::parse_word(std::string_view word) const {
  GroupElement out = identity_;
  std::istringstream is{std::string(word)};
  std::string tok;
  while (is >> tok) {
    if (tok == "e" || tok == "1") continue;
    std::string name = tok;
    long k = 1;
    const auto caret = tok.find('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string exp = tok.substr(caret + 1);
      std::size_t used = 0;
      try {
        k = std::stol(exp, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != exp.size()) throw InvalidInput("bad exponent in word token '" + tok + "'");
    }
    auto it = std::find_if(base_names_.begin(), base_names_.end(), [&](const Generator& g) { return g.name == name; });
    if (it == base_names_.end())
      throw InvalidInput("unknown generator '" + name + "' for family " + std::string(family_name(family_)));
    out = multiply(out, power(it->element, k));
  }
  return out;
}

PairPresentation PairPresentation::with_generator_order(const std::vector<std::size_t>& order) const {
  if (order.size() != gamma_.size()) throw InvalidInput("generator order has wrong length");
  PairPresentation out = *this;
  std::vector<bool> seen(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= gamma_.size() || seen[order[i]]) throw InvalidInput("generator order is not a permutation");
    seen[order[i]] = true;
    out.gamma_[i] = gamma_[order[i]];
  }
  return out;
}

PairPresentation PairPresentation::with_budgets(Budgets budgets) const {
  PairPresentation out = *this;
  out.budgets_ = budgets;
  return out;
}

std::string PairPresentation::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::sl2_s_integers: {
      os << "(SL(2,Z[1/";
      for (std::size_t i = 0; i < params_.primes.size(); ++i) os << (i ? "," : "") << params_.primes[i];
      os << "]), SL(2,Z))";
      break;
    }
    case Family::baumslag_solitar: os << "(BS(" << params_.m << "," << params_.n << "), <b>)"; break;
    case Family::lamplighter: os << "(Z/" << params_.lamp_order << " wr Z, sum_N Z/" << params_.lamp_order << ")"; break;
    case Family::free2: os << "(F(a,b), <a>)"; break;
  }
  return os.str();
}

PairPresentation make_sl2_pair(std::vector<int> primes, Budgets budgets) {
  FamilyParams p;
  p.primes = std::move(primes);
  return PairPresentation(Family::sl2_s_integers, std::move(p), budgets);
}

PairPresentation make_baumslag_solitar_pair(int m, int n, Budgets budgets) {
  FamilyParams p;
  p.m = m;
  p.n = n;
  return PairPresentation(Family::baumslag_solitar, std::move(p), budgets);
}

PairPresentation make_lamplighter_pair(int lamp_order, int window, Budgets budgets) {
  FamilyParams p;
  p.lamp_order = lamp_order;
  p.lamp_window = window;
  return PairPresentation(Family::lamplighter, std::move(p), budgets);
}

PairPresentation make_free2_pair(Budgets budgets) { return PairPresentation(Family::free2, FamilyParams{}, budgets); }

std::optional<std::size_t> element_length(const PairPresentation& pres, const GroupElement& g, std::size_t budget) {
  if (!same_family(g, pres.identity())) throw InvalidInput("element_length: element of another family");
  if (is_identity(g)) return 0;

  struct Side {
    std::unordered_map<std::string, std::size_t> dist;
    std::vector<GroupElement> frontier;
    std::size_t depth = 0;
  };
  Side fwd, bwd;
  fwd.dist.emplace(serialize(pres.identity()), 0);
  fwd.frontier.push_back(pres.identity());
  bwd.dist.emplace(serialize(g), 0);
  bwd.frontier.push_back(g);
  const auto& gens = pres.gamma_generators();

  while (!fwd.frontier.empty() && !bwd.frontier.empty()) {
    Side& grow = fwd.frontier.size() <= bwd.frontier.size() ? fwd : bwd;
    const Side& other = &grow == &fwd ? bwd : fwd;
    std::vector<GroupElement> next;
    std::optional<std::size_t> best;
    for (const auto& x : grow.frontier) {
      for (const auto& s : gens) {
        GroupElement y = multiply(x, s.element);
        std::string key = serialize(y);
        if (grow.dist.count(key)) continue;
        if (auto it = other.dist.find(key); it != other.dist.end()) {
          const std::size_t total = grow.depth + 1 + it->second;
          if (!best || total < *best) best = total;
        }
        grow.dist.emplace(std::move(key), grow.depth + 1);
        next.push_back(std::move(y));
        if (fwd.dist.size() + bwd.dist.size() > budget) return std::nullopt;
      }
    }
    if (best) return best;
    grow.frontier = std::move(next);
    ++grow.depth;
  }
  return std::nullopt;
}

}  // namespace heckepair
