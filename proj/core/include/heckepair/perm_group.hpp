#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heckepair/group.hpp"

namespace heckepair {

// Permutation of {0, ..., degree-1}; image[i] is where i goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> image);
  static Permutation identity(std::size_t degree);

  std::size_t degree() const noexcept { return image_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return image_[i]; }
  const std::vector<std::uint32_t>& image() const noexcept { return image_; }
  bool is_identity() const;

  // (p * q)(i) = q(p(i)): apply p first.
  Permutation then(const Permutation& q) const;
  Permutation inverse() const;

  // Nontrivial cycles, each starting at its least point, sorted by that point.
  std::vector<std::vector<std::uint32_t>> cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> image_;
};

// Base and strong generating set of a permutation group, built by the
// deterministic Schreier-Sims algorithm. Every new base point is the least
// point moved by the generator that forces it, so the caller controls the
// base ordering through the labelling of the points.
class StabilizerChain {
 public:
  StabilizerChain(std::span<const Permutation> generators, std::size_t degree);

  const std::vector<std::uint32_t>& base() const noexcept { return base_; }
  // Orbit length of base()[i] under the i-th stabilizer.
  std::vector<std::size_t> orbit_lengths() const;
  Integer order() const;
  bool contains(const Permutation& p) const;

 private:
  struct Level {
    std::uint32_t point;
    std::vector<Permutation> generators;  // strong generators fixing earlier base points
    std::vector<std::int64_t> transversal_index;  // point -> index into transversal, -1 if not in orbit
    std::vector<std::uint32_t> orbit;
    std::vector<Permutation> transversal;  // transversal[k] maps point to orbit[k]
  };

  void rebuild_orbit(Level& level) const;
  // Sifts p through levels [from, end). Returns the residue and the level it stopped at.
  std::pair<Permutation, std::size_t> sift(Permutation p, std::size_t from) const;
  void add_generator(std::size_t level, const Permutation& p);

  std::size_t degree_;
  std::vector<std::uint32_t> base_;
  std::vector<Level> levels_;
};

}  // namespace heckepair
