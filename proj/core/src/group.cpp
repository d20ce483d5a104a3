#include "heckepair/group.hpp"

#include <sstream>

#include "heckepair/error.hpp"

namespace heckepair {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

Integer floor_mod(const Integer& a, const Integer& b) { return a - floor_div(a, b) * b; }

namespace {

// ---------------------------------------------------------------- matrices

MatrixElt mat_mul(const MatrixElt& x, const MatrixElt& y) {
  const auto& a = x.entries;
  const auto& b = y.entries;
  return MatrixElt{{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                    a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]}};
}

MatrixElt mat_inv(const MatrixElt& x) {
  const auto& a = x.entries;
  return MatrixElt{{a[3], -a[1], -a[2], a[0]}};
}

// ------------------------------------------------------ Baumslag-Solitar

// Appends letters to a normal form, keeping it normal (leftmost reduction).
class BsBuilder {
 public:
  explicit BsBuilder(BsElt start) : e_(std::move(start)) {}

  void append_b(const Integer& k) { e_.tail += k; }

  void append_a(int s) {
    if (!e_.letters.empty() && e_.letters.back().a_sign == -s) {
      // a^-1 b^(m t) a = b^(n t) and a b^(n t) a^-1 = b^(m t).
      const int prev = e_.letters.back().a_sign;
      const Integer divisor = prev == -1 ? e_.m : e_.n;
      if (e_.tail % divisor == 0) {
        const Integer t = e_.tail / divisor;
        const Integer other = prev == -1 ? e_.n : e_.m;
        Integer before = std::move(e_.letters.back().b_power);
        e_.letters.pop_back();
        e_.tail = before + other * t;
        return;
      }
    }
    // b^(m q + r) a = b^r a b^(n q);  b^(n q + r) a^-1 = b^r a^-1 b^(m q)
    const Integer modulus = s == 1 ? e_.m : e_.n;
    const Integer other = s == 1 ? e_.n : e_.m;
    Integer q = floor_div(e_.tail, modulus);
    Integer r = e_.tail - q * modulus;
    e_.letters.push_back(BsLetter{std::move(r), s});
    e_.tail = other * q;
  }

  void append(const BsElt& h) {
    for (const auto& letter : h.letters) {
      append_b(letter.b_power);
      append_a(letter.a_sign);
    }
    append_b(h.tail);
  }

  BsElt take() { return std::move(e_); }

 private:
  BsElt e_;
};

BsElt bs_mul(const BsElt& x, const BsElt& y) {
  BsBuilder builder(x);
  builder.append(y);
  return builder.take();
}

BsElt bs_inv(const BsElt& x) {
  BsBuilder builder(bs::identity(x.m, x.n));
  builder.append_b(-x.tail);
  for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) {
    builder.append_a(-it->a_sign);
    builder.append_b(-it->b_power);
  }
  return builder.take();
}

// ------------------------------------------------------------------ wreath

WreathElt wr_mul(const WreathElt& x, const WreathElt& y) {
  WreathElt out{x.order, x.lamps, x.shift + y.shift};
  for (const auto& [pos, val] : y.lamps) {
    int& slot = out.lamps[pos + x.shift];
    slot = (slot + val) % x.order;
    if (slot == 0) out.lamps.erase(pos + x.shift);
  }
  return out;
}

WreathElt wr_inv(const WreathElt& x) {
  WreathElt out{x.order, {}, -x.shift};
  for (const auto& [pos, val] : x.lamps) out.lamps.emplace(pos - x.shift, x.order - val);
  return out;
}

// -------------------------------------------------------------------- free

FreeElt free_mul(const FreeElt& x, const FreeElt& y) {
  FreeElt out = x;
  for (auto letter : y.letters) {
    if (!out.letters.empty() && out.letters.back() == -letter)
      out.letters.pop_back();
    else
      out.letters.push_back(letter);
  }
  return out;
}

FreeElt free_inv(const FreeElt& x) {
  FreeElt out;
  out.letters.reserve(x.letters.size());
  for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

std::string power_token(std::string_view name, const Integer& k) {
  std::string s(name);
  if (k != 1) s += "^" + k.str();
  return s;
}

}  // namespace

namespace bs {

BsElt identity(int m, int n) { return BsElt{m, n, {}, Integer(0)}; }

BsElt generator_a(int m, int n, int sign) {
  BsBuilder builder(identity(m, n));
  builder.append_a(sign);
  return builder.take();
}

BsElt generator_b(int m, int n, const Integer& power) { return BsElt{m, n, {}, power}; }

}  // namespace bs

namespace matrix {

MatrixElt make(Rational a, Rational b, Rational c, Rational d) {
  return MatrixElt{{std::move(a), std::move(b), std::move(c), std::move(d)}};
}

MatrixElt identity() { return make(1, 0, 0, 1); }

Rational determinant(const MatrixElt& g) {
  const auto& e = g.entries;
  return e[0] * e[3] - e[1] * e[2];
}

}  // namespace matrix

bool same_family(const GroupElement& a, const GroupElement& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<BsElt>(&a)) {
    const auto& y = std::get<BsElt>(b);
    return x->m == y.m && x->n == y.n;
  }
  if (const auto* x = std::get_if<WreathElt>(&a)) return x->order == std::get<WreathElt>(b).order;
  return true;
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  if (!same_family(a, b)) throw InvalidInput("multiply: elements of different families");
  return std::visit(
      [&](const auto& x) -> GroupElement {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, MatrixElt>) return mat_mul(x, y);
        else if constexpr (std::is_same_v<T, BsElt>) return bs_mul(x, y);
        else if constexpr (std::is_same_v<T, WreathElt>) return wr_mul(x, y);
        else return free_mul(x, y);
      },
      a);
}

GroupElement invert(const GroupElement& a) {
  return std::visit(
      [](const auto& x) -> GroupElement {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatrixElt>) return mat_inv(x);
        else if constexpr (std::is_same_v<T, BsElt>) return bs_inv(x);
        else if constexpr (std::is_same_v<T, WreathElt>) return wr_inv(x);
        else return free_inv(x);
      },
      a);
}

GroupElement identity_like(const GroupElement& like) {
  return std::visit(
      [](const auto& x) -> GroupElement {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatrixElt>) return matrix::identity();
        else if constexpr (std::is_same_v<T, BsElt>) return bs::identity(x.m, x.n);
        else if constexpr (std::is_same_v<T, WreathElt>) return WreathElt{x.order, {}, 0};
        else return FreeElt{};
      },
      like);
}

bool is_identity(const GroupElement& g) { return g == identity_like(g); }

std::string to_string(const GroupElement& g) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, MatrixElt>) {
          const auto& e = x.entries;
          os << "[[" << e[0] << "," << e[1] << "],[" << e[2] << "," << e[3] << "]]";
        } else if constexpr (std::is_same_v<T, BsElt>) {
          std::vector<std::string> parts;
          for (const auto& l : x.letters) {
            if (l.b_power != 0) parts.push_back(power_token("b", l.b_power));
            parts.push_back(l.a_sign == 1 ? "a" : "a^-1");
          }
          if (x.tail != 0) parts.push_back(power_token("b", x.tail));
          if (parts.empty()) return "e";
          for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? " " : "") << parts[i];
        } else if constexpr (std::is_same_v<T, WreathElt>) {
          os << "({";
          bool first = true;
          for (const auto& [pos, val] : x.lamps) {
            os << (first ? "" : ",") << pos << ":" << val;
            first = false;
          }
          os << "}," << x.shift << ")";
        } else {
          if (x.letters.empty()) return "e";
          // Group runs of equal letters into powers.
          std::size_t i = 0;
          bool first = true;
          while (i < x.letters.size()) {
            std::size_t j = i;
            while (j < x.letters.size() && x.letters[j] == x.letters[i]) ++j;
            const auto letter = x.letters[i];
            const Integer k = static_cast<long>(letter > 0 ? j - i : -static_cast<long>(j - i));
            os << (first ? "" : " ") << power_token(std::abs(letter) == 1 ? "a" : "b", k);
            first = false;
            i = j;
          }
        }
        return os.str();
      },
      g);
}

std::string serialize(const GroupElement& g) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, MatrixElt>) {
          for (std::size_t i = 0; i < 4; ++i) os << (i ? " " : "") << x.entries[i];
        } else if constexpr (std::is_same_v<T, BsElt>) {
          for (const auto& l : x.letters) os << l.b_power << (l.a_sign == 1 ? "+" : "-") << " ";
          os << "|" << x.tail;
        } else if constexpr (std::is_same_v<T, WreathElt>) {
          os << x.shift << ";";
          bool first = true;
          for (const auto& [pos, val] : x.lamps) {
            os << (first ? "" : ",") << pos << ":" << val;
            first = false;
          }
        } else {
          os << "w";
          for (auto l : x.letters) os << (l == 1 ? 'a' : l == -1 ? 'A' : l == 2 ? 'b' : 'B');
        }
        return os.str();
      },
      g);
}

GroupElement deserialize(std::string_view text, const GroupElement& like) {
  const std::string s(text);
  auto fail = [&]() { return InvalidInput("cannot parse element '" + s + "'"); };
  try {
    return std::visit(
        [&](const auto& proto) -> GroupElement {
          using T = std::decay_t<decltype(proto)>;
          if constexpr (std::is_same_v<T, MatrixElt>) {
            std::istringstream is(s);
            MatrixElt out;
            for (auto& e : out.entries) {
              std::string tok;
              if (!(is >> tok)) throw fail();
              e = Rational(tok);
            }
            if (matrix::determinant(out) != 1) throw fail();
            return out;
          } else if constexpr (std::is_same_v<T, BsElt>) {
            const auto bar = s.find('|');
            if (bar == std::string::npos) throw fail();
            BsElt out = bs::identity(proto.m, proto.n);
            std::istringstream is(s.substr(0, bar));
            std::string tok;
            while (is >> tok) {
              const char sign = tok.back();
              if (sign != '+' && sign != '-') throw fail();
              out.letters.push_back(BsLetter{Integer(tok.substr(0, tok.size() - 1)), sign == '+' ? 1 : -1});
            }
            out.tail = Integer(s.substr(bar + 1));
            return out;
          } else if constexpr (std::is_same_v<T, WreathElt>) {
            const auto semi = s.find(';');
            if (semi == std::string::npos) throw fail();
            WreathElt out{proto.order, {}, std::stoll(s.substr(0, semi))};
            std::istringstream is(s.substr(semi + 1));
            std::string tok;
            while (std::getline(is, tok, ',')) {
              const auto colon = tok.find(':');
              if (colon == std::string::npos) throw fail();
              out.lamps.emplace(std::stoll(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1)));
            }
            return out;
          } else {
            if (s.empty() || s[0] != 'w') throw fail();
            FreeElt out;
            for (std::size_t i = 1; i < s.size(); ++i) {
              switch (s[i]) {
                case 'a': out.letters.push_back(1); break;
                case 'A': out.letters.push_back(-1); break;
                case 'b': out.letters.push_back(2); break;
                case 'B': out.letters.push_back(-2); break;
                default: throw fail();
              }
            }
            return out;
          }
        },
        like);
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw fail();
  }
}

}  // namespace heckepair
