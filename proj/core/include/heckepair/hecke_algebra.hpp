#pragma once

// Convolution algebra of Lambda-bi-invariant, finitely supported functions on
// Gamma. With T_a the indicator of the double coset a,
//
//   T_a * T_b = sum_d c(a,b;d) T_d,
//   c(a,b;d) = #{ (i,j) : x_i y_j Lambda = z Lambda }
//
// where a = U x_i Lambda, b = U y_j Lambda and z Lambda is one fixed left
// coset in d. Coefficients are exact integers, T_{Lambda} is the unit and
// the degree map T_a -> [Lambda : Lambda cap Lambda^a] is multiplicative.

#include <iosfwd>
#include <map>
#include <span>

#include "heckepair/coset_space.hpp"

namespace heckepair {

struct HeckeElement {
  std::map<std::size_t, Integer> terms;  // double coset id -> nonzero coefficient
  int radius = 0;                        // double cosets are complete up to this depth

  friend bool operator==(const HeckeElement&, const HeckeElement&) = default;
};

HeckeElement basis_element(const DoubleCoset& a, const BallTable& table);

HeckeElement convolve(const DoubleCoset& a, const DoubleCoset& b, const BallTable& table);

// Same product computed from explicit left-coset representatives of a and b.
// Any choice of representatives gives the same result.
HeckeElement convolve_representatives(std::span<const GroupElement> a_reps, std::span<const GroupElement> b_reps,
                                      const BallTable& table);

HeckeElement multiply(const HeckeElement& x, const HeckeElement& y, const BallTable& table);

inline std::size_t degree(const DoubleCoset& a) { return a.degree; }

// Lambda rep^-1 Lambda.
DoubleCoset involution(const DoubleCoset& a, const BallTable& table);
HeckeElement involution(const HeckeElement& x, const BallTable& table);

// sum of coeff * degree; a ring homomorphism to Z.
Integer augmentation(const HeckeElement& x, const BallTable& table);

// CSV with header a,b,d,coeff over all pairs of double cosets of depth <= depth.
void write_multiplication_table_csv(const BallTable& table, int depth, std::ostream& out);

}  // namespace heckepair
