#pragma once

// Exact element arithmetic for the built-in group families.
//
// Every element is stored in a canonical form, so two elements are equal
// exactly when their payloads compare equal member by member.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace heckepair {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2x2 matrix with rational entries and determinant 1, row-major.
struct MatrixElt {
  std::array<Rational, 4> entries;

  friend bool operator==(const MatrixElt&, const MatrixElt&) = default;
};

// One syllable b^b_power a^a_sign of a Baumslag-Solitar normal form.
struct BsLetter {
  Integer b_power;
  int a_sign = 1;

  friend bool operator==(const BsLetter&, const BsLetter&) = default;
};

// Britton normal form in BS(m,n) = <a,b | a^-1 b^m a = b^n>:
//   b^p0 a^s0 b^p1 a^s1 ... b^p(l-1) a^s(l-1) b^tail
// with 0 <= p_i < m when s_i = +1, 0 <= p_i < n when s_i = -1, and no pinch
// (a^-1 a or a a^-1 separated by a zero b-power).
struct BsElt {
  int m = 1;
  int n = 1;
  std::vector<BsLetter> letters;
  Integer tail;

  friend bool operator==(const BsElt&, const BsElt&) = default;
};

// (f, k) in F wr Z with F = Z/order. lamps holds the nonzero values of f,
// each in [1, order). Group law (f,k)(f',k') = (f + k.f', k + k').
struct WreathElt {
  int order = 2;
  std::map<std::int64_t, int> lamps;
  std::int64_t shift = 0;

  friend bool operator==(const WreathElt&, const WreathElt&) = default;
};

// Freely reduced word over a (+1), a^-1 (-1), b (+2), b^-1 (-2).
struct FreeElt {
  std::vector<std::int8_t> letters;

  friend bool operator==(const FreeElt&, const FreeElt&) = default;
};

using GroupElement = std::variant<MatrixElt, BsElt, WreathElt, FreeElt>;

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement invert(const GroupElement& a);

// Identity of the family (and parameters) that `like` belongs to.
GroupElement identity_like(const GroupElement& like);
bool is_identity(const GroupElement& g);

// True when both elements belong to the same family with equal parameters.
bool same_family(const GroupElement& a, const GroupElement& b);

// Human readable form, e.g. "[[2,1],[1,1]]" or "b^2 a b^-1".
std::string to_string(const GroupElement& g);

// Compact, lossless text form used by the cache; `like` supplies the family
// parameters for parsing.
std::string serialize(const GroupElement& g);
GroupElement deserialize(std::string_view text, const GroupElement& like);

namespace bs {

// Builders for Baumslag-Solitar elements (already in normal form).
BsElt identity(int m, int n);
BsElt generator_a(int m, int n, int sign);
BsElt generator_b(int m, int n, const Integer& power);

}  // namespace bs

namespace matrix {

MatrixElt make(Rational a, Rational b, Rational c, Rational d);
MatrixElt identity();
Rational determinant(const MatrixElt& g);

}  // namespace matrix

Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);

}  // namespace heckepair
