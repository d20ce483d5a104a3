#include "heckepair/coset_space.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "heckepair/error.hpp"

namespace heckepair {

// ------------------------------------------------------------------ BallTable

std::optional<int> BallTable::layer(CosetId c) const {
  const int l = nodes_.at(c).layer;
  if (l < 0) return std::nullopt;
  return l;
}

std::optional<int> BallTable::depth(CosetId c) const {
  const auto o = orbit_of_.at(c);
  if (o == kNone) return std::nullopt;
  return orbits_[static_cast<std::size_t>(o)].depth;
}

std::optional<CosetId> BallTable::find(const GroupElement& g) const { return find_key(pres_.coset_key(g)); }

std::optional<CosetId> BallTable::find_key(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<CosetId> BallTable::gamma_edge(CosetId c, std::size_t gen) const {
  const auto e = gamma_edges_.at(c * pres_.gamma_generators().size() + gen);
  if (e == kNone) return std::nullopt;
  return static_cast<CosetId>(e);
}

std::optional<CosetId> BallTable::lambda_edge(CosetId c, std::size_t gen) const {
  const auto e = lambda_edges_.at(c * pres_.lambda_generators().size() + gen);
  if (e == kNone) return std::nullopt;
  return static_cast<CosetId>(e);
}

std::optional<std::size_t> BallTable::orbit_of(CosetId c) const {
  const auto o = orbit_of_.at(c);
  if (o == kNone) return std::nullopt;
  return static_cast<std::size_t>(o);
}

std::vector<CosetId> BallTable::incomplete_cosets() const {
  std::vector<CosetId> out;
  for (CosetId c = 0; c < nodes_.size(); ++c)
    if (incomplete_[c]) out.push_back(c);
  return out;
}

std::string BallTable::rep_word(CosetId c) const {
  std::string word;
  for (std::int64_t cur = c; nodes_.at(cur).parent != kNone; cur = nodes_[cur].parent) {
    const auto& node = nodes_[cur];
    const auto& gens = node.via_lambda ? pres_.lambda_generators() : pres_.gamma_generators();
    word += (word.empty() ? "" : " ") + gens.at(node.via).name;
  }
  return word.empty() ? "e" : word;
}

CosetId BallTable::add_node(Node node) {
  const auto id = static_cast<CosetId>(nodes_.size());
  index_.emplace(node.key, id);
  nodes_.push_back(std::move(node));
  gamma_edges_.resize(nodes_.size() * pres_.gamma_generators().size(), kNone);
  lambda_edges_.resize(nodes_.size() * pres_.lambda_generators().size(), kNone);
  orbit_of_.push_back(kNone);
  incomplete_.push_back(false);
  return id;
}

// Groups cosets by provisional orbit label, picks representatives and orders
// orbits by (depth, least member key), which does not depend on the order
// generators were explored in.
void BallTable::finalize_orbits(const std::vector<std::int64_t>& provisional) {
  std::unordered_map<std::int64_t, std::vector<CosetId>> groups;
  std::vector<std::int64_t> labels;
  for (CosetId c = 0; c < nodes_.size(); ++c) {
    const auto p = provisional[c];
    if (p == kNone) continue;
    auto [it, fresh] = groups.try_emplace(p);
    if (fresh) labels.push_back(p);
    it->second.push_back(c);
  }
  struct Entry {
    DoubleCoset dc;
    const std::string* least_key;
  };
  std::vector<Entry> entries;
  entries.reserve(labels.size());
  for (auto label : labels) {
    DoubleCoset dc;
    dc.members = std::move(groups[label]);
    std::sort(dc.members.begin(), dc.members.end());
    dc.degree = dc.members.size();
    // unknown layers (-1) rank after every known one
    const auto rank = [&](CosetId c) {
      const int l = nodes_[c].layer;
      return std::pair<unsigned, const std::string&>(l < 0 ? std::numeric_limits<unsigned>::max() : unsigned(l),
                                                     nodes_[c].key);
    };
    CosetId best = dc.members.front();
    const std::string* least_key = &nodes_[best].key;
    for (CosetId c : dc.members) {
      if (rank(c) < rank(best)) best = c;
      if (nodes_[c].key < *least_key) least_key = &nodes_[c].key;
    }
    dc.rep_coset = best;
    dc.rep = nodes_[best].rep;
    dc.depth = nodes_[best].depth;
    dc.min_layer = nodes_[best].layer;
    for (CosetId c : dc.members)
      if (nodes_[c].depth != dc.depth) throw std::logic_error("orbit members at different depths");
    entries.push_back({std::move(dc), least_key});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.dc.depth != b.dc.depth) return a.dc.depth < b.dc.depth;
    return *a.least_key < *b.least_key;
  });
  std::fill(orbit_of_.begin(), orbit_of_.end(), kNone);
  orbits_.clear();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].dc.id = i;
    for (CosetId c : entries[i].dc.members) orbit_of_[c] = static_cast<std::int64_t>(i);
    orbits_.push_back(std::move(entries[i].dc));
  }
}

void BallTable::fill_missing_gamma_edges() {
  const auto& gens = pres_.gamma_generators();
  for (CosetId c = 0; c < nodes_.size(); ++c) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto& edge = gamma_edges_[c * gens.size() + i];
      if (edge != kNone) continue;
      if (auto target = find(multiply(gens[i].element, nodes_[c].rep))) edge = *target;
    }
  }
}

// ---------------------------------------------------------------- expand_ball

BallTable expand_ball(const PairPresentation& pres, int radius) {
  if (radius < 0) throw InvalidInput("expand_ball: radius must be >= 0");
  if (radius > pres.budgets().max_radius)
    throw InvalidInput("expand_ball: radius " + std::to_string(radius) + " exceeds max_radius " +
                       std::to_string(pres.budgets().max_radius));
  if (pres.family() == Family::lamplighter && radius > pres.params().lamp_window)
    throw InvalidInput("expand_ball: lamplighter radius " + std::to_string(radius) + " exceeds lamp_window " +
                       std::to_string(pres.params().lamp_window));

  BallTable table(pres);
  table.radius_ = radius;
  const auto& gens = pres.gamma_generators();
  const auto& lgens = pres.lambda_generators();
  const std::size_t max_ball = pres.budgets().max_ball;
  const std::size_t max_orbit = pres.budgets().max_orbit;

  BallTable::Node root{pres.identity(), pres.coset_key(pres.identity())};
  root.layer = 0;
  table.add_node(std::move(root));

  // Phase A: Schreier layers, i.e. breadth-first search over left
  // multiplication by the Gamma generators.
  for (CosetId c = 0; c < table.nodes_.size(); ++c) {
    const int l = table.nodes_[c].layer;
    if (l >= radius) break;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      GroupElement y = multiply(gens[i].element, table.nodes_[c].rep);
      std::string key = pres.coset_key(y);
      CosetId target;
      if (auto found = table.find_key(key)) {
        target = *found;
      } else {
        if (table.nodes_.size() >= max_ball)
          throw BudgetExceeded("ball exceeds max_ball = " + std::to_string(max_ball), l);
        BallTable::Node node{std::move(y), std::move(key)};
        node.layer = l + 1;
        node.parent = c;
        node.via = static_cast<std::int32_t>(i);
        target = table.add_node(std::move(node));
      }
      table.gamma_edges_[c * gens.size() + i] = target;
    }
  }

  // Phase B: depth d(Lambda, x). Sphere k+1 is the Lambda-saturation of the
  // generator images of sphere k.
  std::vector<std::int64_t> provisional(table.nodes_.size(), BallTable::kNone);
  std::int64_t next_label = 0;

  // Closes the orbit of start at depth k. False when it exceeds max_orbit.
  const auto saturate = [&](CosetId start, int k) {
    struct Member {
      GroupElement rep;
      std::string key;
      std::int64_t id;  // existing table id or kNone
      std::int64_t parent;
      std::int32_t via;
    };
    std::vector<Member> members;
    std::unordered_map<std::string, std::size_t> local;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges;  // member, gen, member
    members.push_back({table.nodes_[start].rep, table.nodes_[start].key, start, BallTable::kNone, -1});
    local.emplace(table.nodes_[start].key, 0);
    bool complete = true;
    for (std::size_t m = 0; m < members.size() && complete; ++m) {
      for (std::size_t j = 0; j < lgens.size(); ++j) {
        GroupElement y = multiply(lgens[j].element, members[m].rep);
        std::string key = pres.coset_key(y);
        auto [it, fresh] = local.try_emplace(key, members.size());
        if (fresh) {
          if (members.size() >= max_orbit) {
            complete = false;
            break;
          }
          const auto existing = table.find_key(key);
          members.push_back({std::move(y), std::move(key), existing ? std::int64_t{*existing} : BallTable::kNone,
                             static_cast<std::int64_t>(m), static_cast<std::int32_t>(j)});
        }
        edges.emplace_back(m, j, it->second);
      }
    }

    if (!complete) {
      for (const auto& m : members) {
        if (m.id == BallTable::kNone || table.incomplete_[m.id]) continue;
        table.incomplete_[m.id] = true;
        ++table.incomplete_count_;
      }
      return false;
    }

    std::vector<CosetId> ids(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
      auto& mem = members[m];
      if (mem.id != BallTable::kNone) {
        ids[m] = static_cast<CosetId>(mem.id);
        continue;
      }
      if (table.nodes_.size() >= max_ball)
        throw BudgetExceeded("orbit closure exceeds max_ball = " + std::to_string(max_ball), k - 1);
      BallTable::Node node{std::move(mem.rep), std::move(mem.key)};
      node.parent = ids[static_cast<std::size_t>(mem.parent)];
      node.via = mem.via;
      node.via_lambda = true;
      ids[m] = table.add_node(std::move(node));
      provisional.push_back(BallTable::kNone);
    }
    for (const auto& [from, gen, to] : edges) table.lambda_edges_[ids[from] * lgens.size() + gen] = ids[to];
    for (CosetId id : ids) {
      provisional[id] = next_label;
      table.nodes_[id].depth = k;
    }
    ++next_label;
    return true;
  };

  std::vector<CosetId> sphere{0};
  table.nodes_[0].depth = 0;
  table.completed_radius_ = -1;
  for (int k = 0;; ++k) {
    bool complete = true;
    for (std::size_t s = 0; s < sphere.size(); ++s) {
      const CosetId c = sphere[s];
      if (provisional[c] != BallTable::kNone || table.incomplete_[c]) continue;
      if (!saturate(c, k)) complete = false;
    }
    if (!complete) break;
    table.completed_radius_ = k;
    if (k == radius) break;

    std::vector<CosetId> shell;  // sphere k in id order
    for (CosetId c = 0; c < table.nodes_.size(); ++c)
      if (table.nodes_[c].depth == k) shell.push_back(c);
    sphere.clear();
    for (CosetId c : shell) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        auto& edge = table.gamma_edges_[c * gens.size() + i];
        CosetId target;
        if (edge != BallTable::kNone) {
          target = static_cast<CosetId>(edge);
        } else {
          GroupElement y = multiply(gens[i].element, table.nodes_[c].rep);
          std::string key = pres.coset_key(y);
          if (auto found = table.find_key(key)) {
            target = *found;
          } else {
            if (table.nodes_.size() >= max_ball)
              throw BudgetExceeded("ball exceeds max_ball = " + std::to_string(max_ball), k);
            BallTable::Node node{std::move(y), std::move(key)};
            node.parent = c;
            node.via = static_cast<std::int32_t>(i);
            target = table.add_node(std::move(node));
            provisional.push_back(BallTable::kNone);
          }
          table.gamma_edges_[c * gens.size() + i] = target;
        }
        if (table.nodes_[target].depth < 0) {
          table.nodes_[target].depth = k + 1;
          sphere.push_back(target);
        }
      }
    }
  }
  // Depths were assigned to sphere members before their orbits closed; drop
  // them where the closure failed.
  for (CosetId c = 0; c < table.nodes_.size(); ++c)
    if (provisional[c] == BallTable::kNone) table.nodes_[c].depth = -1;

  table.finalize_orbits(provisional);
  table.fill_missing_gamma_edges();
  return table;
}

// ------------------------------------------------------------------- queries

std::optional<std::vector<CosetId>> lambda_orbit(const BallTable& table, CosetId c, std::size_t budget) {
  if (c >= table.size()) throw OutOfRange("lambda_orbit: coset not in table", -1);
  const auto o = table.orbit_of(c);
  if (!o) return std::nullopt;
  const auto& members = table.orbits()[*o].members;
  if (members.size() > budget) return std::nullopt;
  return members;
}

std::optional<std::size_t> index(const PairPresentation& pres, const GroupElement& gamma, std::size_t budget) {
  if (!same_family(gamma, pres.identity())) throw InvalidInput("index: element of another family");
  if (pres.family() == Family::lamplighter) {
    const auto shift = std::get<WreathElt>(gamma).shift;
    if (shift > pres.params().lamp_window)
      throw OutOfRange("index: lamplighter shift " + std::to_string(shift) + " exceeds lamp_window", -1);
  }
  const auto& lgens = pres.lambda_generators();
  // Right coset H.lambda with H = Lambda cap Lambda^gamma is stored as
  // u = lambda^-1 gamma; H.lambda = H.lambda' iff u'^-1 u is in Lambda.
  std::vector<GroupElement> cosets{gamma};
  for (std::size_t k = 0; k < cosets.size(); ++k) {
    for (const auto& s : lgens) {
      GroupElement u = multiply(invert(s.element), cosets[k]);
      const GroupElement u_inv = invert(u);
      const bool seen = std::any_of(cosets.begin(), cosets.end(),
                                    [&](const GroupElement& v) { return pres.in_lambda(multiply(u_inv, v)); });
      if (seen) continue;
      if (cosets.size() >= budget) return std::nullopt;
      cosets.push_back(std::move(u));
    }
  }
  return cosets.size();
}

int coset_distance(const BallTable& table, CosetId c1, CosetId c2) {
  if (c1 >= table.size() || c2 >= table.size()) throw OutOfRange("coset_distance: coset not in table", -1);
  if (c1 == c2) return 0;
  const GroupElement g = multiply(invert(table.rep(c1)), table.rep(c2));
  const auto target = table.find(g);
  if (target) {
    if (auto d = table.depth(*target)) return *d;
  }
  const auto d1 = table.depth(c1), d2 = table.depth(c2);
  const int needed = d1 && d2 ? *d1 + *d2 : -1;
  throw OutOfRange("coset_distance: double coset of rep(c1)^-1 rep(c2) not materialized; needs radius " +
                       (needed >= 0 ? std::to_string(needed) : std::string("unknown")),
                   needed);
}

std::optional<int> schreier_distance(const BallTable& table, CosetId c1, CosetId c2) {
  if (c1 >= table.size() || c2 >= table.size()) throw OutOfRange("schreier_distance: coset not in table", -1);
  const std::size_t ngen = table.presentation().gamma_generators().size();
  std::vector<std::vector<CosetId>> adjacency(table.size());
  for (CosetId c = 0; c < table.size(); ++c) {
    for (std::size_t i = 0; i < ngen; ++i) {
      if (auto t = table.gamma_edge(c, i)) {
        adjacency[c].push_back(*t);
        adjacency[*t].push_back(c);
      }
    }
  }
  std::vector<int> dist(table.size(), -1);
  std::deque<CosetId> queue{c1};
  dist[c1] = 0;
  while (!queue.empty()) {
    const CosetId c = queue.front();
    queue.pop_front();
    if (c == c2) return dist[c];
    for (CosetId t : adjacency[c]) {
      if (dist[t] >= 0) continue;
      dist[t] = dist[c] + 1;
      queue.push_back(t);
    }
  }
  return std::nullopt;
}

std::vector<DoubleCoset> double_cosets_up_to(const BallTable& table, int radius) {
  if (radius > table.radius())
    throw OutOfRange("double_cosets_up_to: radius " + std::to_string(radius) + " beyond table radius " +
                         std::to_string(table.radius()),
                     radius);
  const int done = table.completed_radius();
  if (done < radius)
    throw BudgetExceeded("double_cosets_up_to: an orbit meeting B(Lambda," + std::to_string(radius) +
                             ") exceeded max_orbit",
                         done);
  std::vector<DoubleCoset> out;
  for (const auto& dc : table.orbits())
    if (dc.depth <= radius) out.push_back(dc);
  return out;
}

HeckeVerdict is_hecke_at(const PairPresentation& pres, int radius, std::size_t budget) {
  Budgets b = pres.budgets();
  b.max_orbit = budget;
  HeckeVerdict verdict;
  verdict.budget = budget;
  try {
    const BallTable table = expand_ball(pres.with_budgets(b), radius);
    if (!table.saturated()) {
      verdict.kind = HeckeVerdict::Kind::unknown;
      const auto open = table.incomplete_cosets();
      if (!open.empty()) verdict.witness = open.front();
      return verdict;
    }
  } catch (const BudgetExceeded&) {
    verdict.kind = HeckeVerdict::Kind::unknown;
    return verdict;
  }
  verdict.kind = HeckeVerdict::Kind::confirmed_up_to;
  verdict.radius = radius;
  return verdict;
}

GrowthProfile growth(const BallTable& table, int radius) {
  const auto orbits = double_cosets_up_to(table, radius);
  GrowthProfile profile;
  for (int r = 0; r <= radius; ++r) {
    GrowthRow row;
    row.radius = r;
    for (const auto& dc : orbits) {
      if (dc.depth > r) continue;
      row.ball += dc.degree;
      ++row.orbits;
      row.max_orbit = std::max(row.max_orbit, dc.degree);
    }
    profile.rows.push_back(row);
  }
  return profile;
}

GrowthProfile growth(const PairPresentation& pres, int radius) { return growth(expand_ball(pres, radius), radius); }

void write_growth_csv(const GrowthProfile& profile, std::ostream& out) {
  out << "radius,ball,orbits,max_orbit\n";
  for (const auto& row : profile.rows)
    out << row.radius << "," << row.ball << "," << row.orbits << "," << row.max_orbit << "\n";
}

void write_dot(const BallTable& table, std::ostream& out) {
  const auto& gens = table.presentation().gamma_generators();
  out << "digraph schreier {\n";
  for (CosetId c = 0; c < table.size(); ++c) {
    const auto l = table.layer(c);
    out << "  c" << c << " [label=\"" << (l ? std::to_string(*l) : ">" + std::to_string(table.radius()))
        << "\"];\n";
  }
  for (CosetId c = 0; c < table.size(); ++c)
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (auto t = table.gamma_edge(c, i))
        out << "  c" << c << " -> c" << *t << " [label=\"" << gens[i].name << "\"];\n";
  out << "}\n";
}

// -------------------------------------------------------------- serialization

namespace {

std::string join_edges(const std::vector<std::int64_t>& edges, std::size_t begin, std::size_t count) {
  std::string s;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) s += ',';
    const auto e = edges[begin + i];
    s += e < 0 ? std::string("-") : std::to_string(e);
  }
  return s;
}

std::vector<std::int64_t> split_edges(const std::string& field, std::size_t expected) {
  std::vector<std::int64_t> out;
  std::istringstream is(field);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(tok == "-" ? -1 : std::stoll(tok));
  if (out.size() != expected) throw InvalidInput("ball table: wrong edge count");
  return out;
}

}  // namespace

void write_ball_table(const BallTable& table, std::ostream& out) {
  const std::size_t ng = table.pres_.gamma_generators().size();
  const std::size_t nl = table.pres_.lambda_generators().size();
  out << "heckepair-balltable " << kBallTableFormatVersion << "\n";
  out << "radius " << table.radius_ << "\n";
  out << "completed " << table.completed_radius_ << "\n";
  out << "cosets " << table.nodes_.size() << "\n";
  for (CosetId c = 0; c < table.nodes_.size(); ++c) {
    const auto& n = table.nodes_[c];
    out << c << '\t' << n.layer << '\t' << n.depth << '\t' << n.parent << '\t' << n.via << '\t' << (n.via_lambda ? 'L' : 'G') << '\t'
        << table.orbit_of_[c] << '\t' << (table.incomplete_[c] ? 1 : 0) << '\t' << n.key << '\t'
        << join_edges(table.gamma_edges_, c * ng, ng) << '\t' << join_edges(table.lambda_edges_, c * nl, nl) << '\t'
        << serialize(n.rep) << "\n";
  }
}

BallTable read_ball_table(std::istream& in, const PairPresentation& pres) {
  auto expect = [&](const std::string& word) {
    std::string w;
    if (!(in >> w) || w != word) throw InvalidInput("ball table: expected '" + word + "'");
  };
  expect("heckepair-balltable");
  int version = 0;
  in >> version;
  if (version != kBallTableFormatVersion) throw InvalidInput("ball table: unsupported version");
  BallTable table(pres);
  expect("radius");
  in >> table.radius_;
  expect("completed");
  in >> table.completed_radius_;
  expect("cosets");
  std::size_t count = 0;
  in >> count;
  std::string line;
  std::getline(in, line);
  const std::size_t ng = pres.gamma_generators().size();
  const std::size_t nl = pres.lambda_generators().size();
  std::vector<std::int64_t> provisional;
  try {
    for (std::size_t c = 0; c < count; ++c) {
      if (!std::getline(in, line)) throw InvalidInput("ball table: truncated");
      std::vector<std::string> f;
      std::istringstream ls(line);
      std::string field;
      while (std::getline(ls, field, '\t')) f.push_back(field);
      if (f.size() != 12 || std::stoull(f[0]) != c) throw InvalidInput("ball table: malformed line");
      BallTable::Node node;
      node.layer = std::stoi(f[1]);
      node.depth = std::stoi(f[2]);
      node.parent = std::stoll(f[3]);
      node.via = std::stoi(f[4]);
      node.via_lambda = f[5] == "L";
      node.rep = deserialize(f[11], pres.identity());
      node.key = pres.coset_key(node.rep);
      if (node.key != f[8]) throw InvalidInput("ball table: key mismatch");
      table.add_node(std::move(node));
      provisional.push_back(std::stoll(f[6]));
      if (f[7] == "1") {
        table.incomplete_[c] = true;
        ++table.incomplete_count_;
      }
      const auto ge = split_edges(f[9], ng);
      const auto le = split_edges(f[10], nl);
      std::copy(ge.begin(), ge.end(), table.gamma_edges_.begin() + static_cast<std::ptrdiff_t>(c * ng));
      std::copy(le.begin(), le.end(), table.lambda_edges_.begin() + static_cast<std::ptrdiff_t>(c * nl));
    }
  } catch (const std::logic_error&) {
    throw InvalidInput("ball table: malformed number");
  }
  table.finalize_orbits(provisional);
  return table;
}

}  // namespace heckepair
