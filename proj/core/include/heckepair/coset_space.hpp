#pragma once

// Balls of the coset space X = Gamma/Lambda.
//
// The quotient distance min over lambda, lambda' of |lambda s^-1 t lambda'|
// need not satisfy the triangle inequality (in BS(2,3) it gives
// Lambda a b a^-1 Lambda the value 3, while Lambda, a.Lambda, a b a^-1.Lambda
// is a path of two unit steps). We use the largest metric below it:
//
//   d(Lambda, g.Lambda) = least k with g in (Lambda S Lambda)^k Lambda,
//
// S the Gamma generators. It is left-invariant and agrees with the quotient
// distance whenever the latter is a metric (e.g. SL(2,Z[1/S]) and BS(1,1),
// but not the lamplighter). depth(x) = d(Lambda, x).
//
// A BallTable is built in two passes. Breadth-first search over the Gamma
// generators (acting on the left) materializes every coset whose Schreier
// layer, min |g lambda'| over the coset, is at most R. Then sphere k+1 of d is
// formed as the Lambda-saturation of the generator images of sphere k, for
// k < R. Depth is constant on Lambda-orbits (double cosets); layer is not.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "heckepair/presentation.hpp"

namespace heckepair {

using CosetId = std::uint32_t;

// A Lambda-orbit on X, i.e. the left cosets inside Lambda.rep.Lambda.
struct DoubleCoset {
  std::size_t id = 0;  // index into BallTable::orbits()
  GroupElement rep;    // member with least layer (unknown layers last), ties broken by least key
  CosetId rep_coset = 0;
  std::vector<CosetId> members;  // sorted
  std::size_t degree = 0;        // == members.size() == [Lambda : Lambda cap Lambda^rep]
  int depth = 0;                 // d(Lambda, x) for every member x
  // min |g| over g in the double coset, -1 when above the table radius.
  // Equals depth when the quotient distance is a metric.
  int min_layer = -1;
};

class BallTable {
 public:
  const PairPresentation& presentation() const noexcept { return pres_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const GroupElement& rep(CosetId c) const { return nodes_.at(c).rep; }
  const std::string& key(CosetId c) const { return nodes_.at(c).key; }
  // Schreier layer; known for every coset reached by the breadth-first pass.
  std::optional<int> layer(CosetId c) const;
  // d(Lambda, c); known when the orbit of c was closed within budget.
  std::optional<int> depth(CosetId c) const;

  std::optional<CosetId> find(const GroupElement& g) const;
  std::optional<CosetId> find_key(const std::string& key) const;

  // Image of c under left multiplication by generator `gen`, when recorded.
  std::optional<CosetId> gamma_edge(CosetId c, std::size_t gen) const;
  std::optional<CosetId> lambda_edge(CosetId c, std::size_t gen) const;

  std::optional<std::size_t> orbit_of(CosetId c) const;
  const std::vector<DoubleCoset>& orbits() const noexcept { return orbits_; }

  // True when every sphere up to radius() was closed within budget.
  bool saturated() const noexcept { return completed_radius_ == radius_; }
  // Largest k such that B(Lambda, k) is complete, -1 if none.
  int completed_radius() const noexcept { return completed_radius_; }
  // Cosets whose orbit exceeded the orbit budget.
  std::vector<CosetId> incomplete_cosets() const;

  // Representative as a word in the Gamma generators (leftmost letter applied last).
  std::string rep_word(CosetId c) const;

  friend BallTable expand_ball(const PairPresentation& pres, int radius);
  friend BallTable read_ball_table(std::istream& in, const PairPresentation& pres);
  friend void write_ball_table(const BallTable& table, std::ostream& out);

 private:
  explicit BallTable(PairPresentation pres) : pres_(std::move(pres)) {}

  static constexpr std::int64_t kNone = -1;

  struct Node {
    GroupElement rep;
    std::string key;
    int layer = -1;
    int depth = -1;
    std::int64_t parent = kNone;
    std::int32_t via = -1;
    bool via_lambda = false;
  };

  CosetId add_node(Node node);
  void finalize_orbits(const std::vector<std::int64_t>& provisional);
  void fill_missing_gamma_edges();

  PairPresentation pres_;
  int radius_ = 0;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, CosetId> index_;
  std::vector<std::int64_t> gamma_edges_;   // size() * gamma generator count
  std::vector<std::int64_t> lambda_edges_;  // size() * lambda generator count
  std::vector<std::int64_t> orbit_of_;      // kNone when the orbit is incomplete or unexplored
  std::vector<bool> incomplete_;
  std::size_t incomplete_count_ = 0;
  int completed_radius_ = 0;
  std::vector<DoubleCoset> orbits_;
};

// Materializes the cosets with Schreier layer <= radius and the ball
// B(Lambda, radius) of d, with closed Lambda-orbits. Throws BudgetExceeded
// when the table outgrows max_ball. An orbit larger than max_orbit stops the
// construction at the previous sphere; see completed_radius().
BallTable expand_ball(const PairPresentation& pres, int radius);

// Full Lambda-orbit of c, or empty when it was not enumerable within budget.
std::optional<std::vector<CosetId>> lambda_orbit(const BallTable& table, CosetId c, std::size_t budget);

// [Lambda : Lambda cap Lambda^gamma] by enumerating right cosets of
// Lambda cap Lambda^gamma in Lambda, using only the test
// "lambda in Lambda^gamma iff gamma^-1 lambda gamma in Lambda". Independent of
// coset keys and of lambda_orbit.
std::optional<std::size_t> index(const PairPresentation& pres, const GroupElement& gamma, std::size_t budget);

// d(c1, c2) = depth of rep(c1)^-1 rep(c2).Lambda.
// Throws OutOfRange when that double coset is not materialized.
int coset_distance(const BallTable& table, CosetId c1, CosetId c2);

// Graph distance in the Schreier graph along recorded edges, for comparison
// with coset_distance. Not Gamma-invariant in general.
std::optional<int> schreier_distance(const BallTable& table, CosetId c1, CosetId c2);

// The Lambda-orbits partitioning B(Lambda, radius) = { x : d(Lambda, x) <= radius }.
std::vector<DoubleCoset> double_cosets_up_to(const BallTable& table, int radius);

struct HeckeVerdict {
  enum class Kind { confirmed_up_to, refuted_by_orbit, unknown };
  Kind kind = Kind::unknown;
  int radius = 0;                  // confirmed_up_to
  std::size_t budget = 0;          // unknown
  std::optional<CosetId> witness;  // coset whose orbit was not closed
};

// Bounded-geometry check at finite scale. Budget exhaustion never refutes.
HeckeVerdict is_hecke_at(const PairPresentation& pres, int radius, std::size_t budget);

struct GrowthRow {
  int radius = 0;
  std::size_t ball = 0;        // |B(Lambda, r)|
  std::size_t orbits = 0;      // Lambda-orbits inside B(Lambda, r)
  std::size_t max_orbit = 0;   // largest of those orbits
};

struct GrowthProfile {
  std::vector<GrowthRow> rows;
};

GrowthProfile growth(const PairPresentation& pres, int radius);
GrowthProfile growth(const BallTable& table, int radius);

void write_growth_csv(const GrowthProfile& profile, std::ostream& out);
void write_dot(const BallTable& table, std::ostream& out);

// Line-oriented text form of a table, used by the cache.
void write_ball_table(const BallTable& table, std::ostream& out);
BallTable read_ball_table(std::istream& in, const PairPresentation& pres);

inline constexpr int kBallTableFormatVersion = 2;

}  // namespace heckepair
