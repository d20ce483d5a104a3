#include "heckepair/perm_group.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace heckepair {

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
  std::vector<bool> hit(image_.size(), false);
  for (auto x : image_) {
    if (x >= image_.size() || hit[x]) throw std::invalid_argument("Permutation: not a bijection");
    hit[x] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<std::uint32_t> image(degree);
  std::iota(image.begin(), image.end(), 0u);
  Permutation p;
  p.image_ = std::move(image);
  return p;
}

bool Permutation::is_identity() const {
  for (std::uint32_t i = 0; i < image_.size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

Permutation Permutation::then(const Permutation& q) const {
  Permutation out;
  out.image_.resize(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) out.image_[i] = q.image_[image_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.image_.resize(image_.size());
  for (std::uint32_t i = 0; i < image_.size(); ++i) out.image_[image_[i]] = i;
  return out;
}

std::vector<std::vector<std::uint32_t>> Permutation::cycles() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> seen(image_.size(), false);
  for (std::uint32_t i = 0; i < image_.size(); ++i) {
    if (seen[i] || image_[i] == i) continue;
    std::vector<std::uint32_t> cycle;
    for (std::uint32_t j = i; !seen[j]; j = image_[j]) {
      seen[j] = true;
      cycle.push_back(j);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

// ------------------------------------------------------------ StabilizerChain

namespace {

std::uint32_t least_moved_point(const Permutation& p) {
  for (std::uint32_t i = 0; i < p.degree(); ++i)
    if (p(i) != i) return i;
  throw std::logic_error("identity has no moved point");
}

}  // namespace

StabilizerChain::StabilizerChain(std::span<const Permutation> generators, std::size_t degree) : degree_(degree) {
  std::vector<Permutation> gens;
  for (const auto& g : generators) {
    if (g.degree() != degree) throw std::invalid_argument("StabilizerChain: generator degree mismatch");
    if (!g.is_identity() && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  }
  if (gens.empty()) return;

  Level first;
  first.point = least_moved_point(gens.front());
  for (const auto& g : gens) first.point = std::min(first.point, least_moved_point(g));
  first.generators = gens;
  rebuild_orbit(first);
  levels_.push_back(std::move(first));

  std::size_t i = levels_.size() - 1;
  while (true) {
    bool extended = false;
    Level& level = levels_[i];
    // add_generator may reallocate levels_, so test `extended` before touching `level`.
    for (std::size_t k = 0; !extended && k < level.orbit.size(); ++k) {
      for (std::size_t s = 0; !extended && s < level.generators.size(); ++s) {
        const auto image = level.generators[s](level.orbit[k]);
        const auto& back = level.transversal[static_cast<std::size_t>(level.transversal_index[image])];
        Permutation schreier = level.transversal[k].then(level.generators[s]).then(back.inverse());
        auto [residue, stop] = sift(std::move(schreier), i + 1);
        if (residue.is_identity()) continue;
        for (std::size_t l = i + 1; l <= stop; ++l) add_generator(l, residue);
        i = stop;
        extended = true;
      }
    }
    if (extended) continue;
    if (i == 0) break;
    --i;
  }
  for (const auto& level : levels_) base_.push_back(level.point);
}

void StabilizerChain::rebuild_orbit(Level& level) const {
  level.orbit.assign(1, level.point);
  level.transversal.assign(1, Permutation::identity(degree_));
  level.transversal_index.assign(degree_, -1);
  level.transversal_index[level.point] = 0;
  for (std::size_t k = 0; k < level.orbit.size(); ++k) {
    for (const auto& g : level.generators) {
      const auto image = g(level.orbit[k]);
      if (level.transversal_index[image] >= 0) continue;
      level.transversal_index[image] = static_cast<std::int64_t>(level.orbit.size());
      level.orbit.push_back(image);
      level.transversal.push_back(level.transversal[k].then(g));
    }
  }
}

std::pair<Permutation, std::size_t> StabilizerChain::sift(Permutation p, std::size_t from) const {
  for (std::size_t l = from; l < levels_.size(); ++l) {
    const auto& level = levels_[l];
    const auto image = p(level.point);
    const auto t = level.transversal_index[image];
    if (t < 0) return {std::move(p), l};
    p = p.then(level.transversal[static_cast<std::size_t>(t)].inverse());
  }
  return {std::move(p), levels_.size()};
}

void StabilizerChain::add_generator(std::size_t l, const Permutation& p) {
  if (l == levels_.size()) {
    Level level;
    level.point = least_moved_point(p);
    levels_.push_back(std::move(level));
  }
  levels_[l].generators.push_back(p);
  rebuild_orbit(levels_[l]);
}

std::vector<std::size_t> StabilizerChain::orbit_lengths() const {
  std::vector<std::size_t> out;
  for (const auto& level : levels_) out.push_back(level.orbit.size());
  return out;
}

Integer StabilizerChain::order() const {
  Integer out = 1;
  for (const auto& level : levels_) out *= level.orbit.size();
  return out;
}

bool StabilizerChain::contains(const Permutation& p) const {
  if (p.degree() != degree_) return false;
  auto [residue, stop] = sift(p, 0);
  return stop == levels_.size() && residue.is_identity();
}

}  // namespace heckepair
