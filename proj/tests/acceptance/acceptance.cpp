// Acceptance suite: one PASS/FAIL line per criterion. `acceptance --only N`
// runs a single criterion. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "heckepair/hecke_algebra.hpp"
#include "heckepair/kernels.hpp"
#include "heckepair/schlichting.hpp"
#include "oracles.hpp"

using namespace heckepair;
namespace fs = std::filesystem;

namespace {

constexpr double kTol = 1e-9;              // kernel verdict tolerance
constexpr double kEmbedTol = 1e-8;         // Schoenberg reproduction
constexpr double kOrbitSeconds = 60.0;     // criterion 1 budget
constexpr double kAlgebraSeconds = 300.0;  // criterion 6 budget
constexpr std::size_t kOrbitBudget = 100000;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<PairPresentation> hecke_families() {
  return {make_sl2_pair({2}), make_baumslag_solitar_pair(2, 3), make_baumslag_solitar_pair(1, 1),
          make_lamplighter_pair(2, 8)};
}

std::vector<CosetId> depth_ball(const BallTable& t, int r) {
  std::vector<CosetId> out;
  for (CosetId c = 0; c < t.size(); ++c)
    if (auto d = t.depth(c); d && *d <= r) out.push_back(c);
  return out;
}

// 1. orbit size equals index for every element of length <= 3
Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (const auto& pres : {make_sl2_pair({2}), make_baumslag_solitar_pair(2, 3), make_lamplighter_pair(2, 8)}) {
    const auto table = expand_ball(pres, 3);
    for (const auto& g : oracle::elements_up_to(pres, 3)) {
      const auto c = table.find(g);
      if (!c) {
        o.fail(pres.describe() + ": coset of " + to_string(g) + " missing");
        continue;
      }
      const auto orbit = lambda_orbit(table, *c, kOrbitBudget);
      const auto idx = index(pres, g, kOrbitBudget);
      if (!orbit || !idx || orbit->size() != *idx)
        o.fail(pres.describe() + ": orbit/index mismatch at " + to_string(g));
      ++checked;
    }
  }
  const double s = seconds_since(t0);
  if (s >= kOrbitSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.pass) o.detail = std::to_string(checked) + " elements, " + std::to_string(s) + " s";
  return o;
}

// 2. pinned index values, by orbit closure, by coset enumeration, and by the naive ball
Outcome criterion2() {
  Outcome o;
  struct Case {
    PairPresentation pres;
    std::string word;
    std::size_t expect;
  };
  const std::vector<Case> cases{{make_sl2_pair({2}), "D2", 6},
                                {make_baumslag_solitar_pair(2, 3), "a", 2},
                                {make_baumslag_solitar_pair(2, 3), "a^-1", 3}};
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto g = c.pres.parse_word(c.word);
    const auto table = expand_ball(c.pres, 1);
    const auto id = table.find(g);
    const auto orbit = id ? lambda_orbit(table, *id, kOrbitBudget) : std::nullopt;
    const auto by_orbit = orbit ? orbit->size() : 0;
    const auto by_cosets = index(c.pres, g, kOrbitBudget).value_or(0);
    const auto nb = oracle::naive_ball(c.pres, 1, kOrbitBudget);
    const auto at = nb.find(c.pres, g);
    const auto by_naive = at ? nb.orbit_sizes[static_cast<std::size_t>(nb.orbit[*at])] : 0;
    detail << c.word << "=" << by_orbit << "/" << by_cosets << "/" << by_naive << " ";
    if (by_orbit != c.expect || by_cosets != c.expect || by_naive != c.expect)
      o.fail(c.pres.describe() + " " + c.word + ": orbit " + std::to_string(by_orbit) + ", cosets " +
             std::to_string(by_cosets) + ", naive " + std::to_string(by_naive) + ", expected " +
             std::to_string(c.expect));
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

// 3. d is a left-invariant metric on B(Lambda, 3)
Outcome criterion3() {
  Outcome o;
  std::ostringstream detail;
  std::mt19937_64 rng(3);
  for (const auto& pres : hecke_families()) {
    const auto table = expand_ball(pres, 6);
    const auto pts = depth_ball(table, 3);
    const std::size_t n = pts.size();
    std::vector<std::vector<int>> d(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = coset_distance(table, pts[i], pts[j]);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][i] != 0) ++bad;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][j] != d[j][i] || (i != j && d[i][j] <= 0)) ++bad;
        if (d[i][j] != *table.depth(table.find(multiply(invert(table.rep(pts[i])), table.rep(pts[j]))).value()))
          ++bad;
      }
    }
    std::size_t triples = 0;
    auto triangle = [&](std::size_t i, std::size_t j, std::size_t k) {
      ++triples;
      if (d[i][k] > d[i][j] + d[j][k]) ++bad;
    };
    if (n <= 200) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) triangle(i, j, k);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (int t = 0; t < 10000; ++t) triangle(pick(rng), pick(rng), pick(rng));
    }
    // invariance under every generator and its inverse
    for (std::size_t g = 0; g < pres.gamma_generators().size(); ++g) {
      std::vector<CosetId> img(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto e = table.gamma_edge(pts[i], g);
        if (!e) {
          o.fail(pres.describe() + ": generator edge missing");
          return o;
        }
        img[i] = *e;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (coset_distance(table, img[i], img[j]) != d[i][j]) ++bad;
    }
    detail << pres.describe() << " |B|=" << n << " triples=" << triples << "; ";
    if (bad) o.fail(pres.describe() + ": " + std::to_string(bad) + " violations");
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

// 4. Hecke verdicts
Outcome criterion4() {
  Outcome o;
  for (const auto& pres : hecke_families()) {
    const auto v = is_hecke_at(pres, 3, pres.budgets().max_orbit);
    if (v.kind != HeckeVerdict::Kind::confirmed_up_to || v.radius != 3)
      o.fail(pres.describe() + " not confirmed up to 3");
  }
  const auto free = make_free2_pair();
  const auto v = is_hecke_at(free, 3, free.budgets().max_orbit);
  if (v.kind != HeckeVerdict::Kind::unknown) o.fail("free2 verdict is not unknown");
  if (o.pass) o.detail = "4 confirmed up to 3, free2 unknown at budget " + std::to_string(v.budget);
  return o;
}

// 5. Schlichting tower
Outcome criterion5() {
  Outcome o;
  std::ostringstream detail;
  for (const auto& pres : hecke_families()) {
    const auto table = expand_ball(pres, 3);
    std::vector<FiniteLevelCompletion> levels;
    for (int l = 0; l <= 3; ++l) levels.push_back(level_action(table, l));
    detail << pres.describe() << " |K|=";
    for (int l = 0; l <= 3; ++l) {
      const auto& k = levels[static_cast<std::size_t>(l)];
      detail << k.order() << (l < 3 ? "," : "; ");
      if (l > 0) {
        if (!restriction_check(k, levels[static_cast<std::size_t>(l - 1)]))
          o.fail(pres.describe() + ": restriction fails at level " + std::to_string(l));
        if (k.order() < levels[static_cast<std::size_t>(l - 1)].order())
          o.fail(pres.describe() + ": order decreases at level " + std::to_string(l));
      }
      if (pres.family() == Family::baumslag_solitar && pres.params().m == 1 && pres.params().n == 1 &&
          k.order() != 1)
        o.fail("BS(1,1): K nontrivial at level " + std::to_string(l));
    }
    if (pres.family() == Family::sl2_s_integers) {
      const std::vector<GroupElement> minus_one{pres.parse_word("S S")};
      if (core_probe(table, minus_one, 3).probes[0].nontrivial_at) o.fail("-I acts nontrivially");
    }
    if (pres.family() == Family::baumslag_solitar && pres.params().m == 2) {
      const std::vector<GroupElement> b{pres.parse_word("b")};
      if (core_probe(table, b, 3).probes[0].nontrivial_at != std::optional<int>(1))
        o.fail("b in BS(2,3) not nontrivial at level 1");
    }
  }
  // free2 has no completion: only level 0 is closed
  const auto free = expand_ball(make_free2_pair(), 3);
  bool refused = false;
  try {
    level_action(free, 1);
  } catch (const BudgetExceeded&) {
    refused = true;
  }
  if (level_action(free, 0).order() != 1 || !refused) o.fail("free2 tower beyond level 0");
  if (o.pass) o.detail = detail.str() + "free2 stops at level 0";
  return o;
}

// 6. associativity and degree map on double cosets of depth <= 2
Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t triples = 0, pairs = 0;
  for (const auto& pres : hecke_families()) {
    const auto table = expand_ball(pres, 6);
    const auto small = double_cosets_up_to(table, 2);
    std::map<std::pair<std::size_t, std::size_t>, HeckeElement> memo;
    auto conv = [&](std::size_t a, std::size_t b) -> const HeckeElement& {
      auto it = memo.find({a, b});
      if (it == memo.end()) it = memo.emplace(std::pair{a, b}, convolve(table.orbits()[a], table.orbits()[b], table)).first;
      return it->second;
    };
    auto times = [&](const HeckeElement& x, const HeckeElement& y) {
      HeckeElement out;
      for (const auto& [a, ca] : x.terms)
        for (const auto& [b, cb] : y.terms)
          for (const auto& [d, c] : conv(a, b).terms) out.terms[d] += ca * cb * c;
      std::erase_if(out.terms, [](const auto& kv) { return kv.second == 0; });
      return out;
    };
    for (const auto& a : small) {
      for (const auto& b : small) {
        ++pairs;
        Integer lhs = 0;
        for (const auto& [d, c] : conv(a.id, b.id).terms) lhs += c * table.orbits()[d].degree;
        if (lhs != Integer(a.degree * b.degree)) o.fail(pres.describe() + ": degree map fails");
        for (const auto& c : small) {
          ++triples;
          const auto ta = basis_element(a, table), tb = basis_element(b, table), tc = basis_element(c, table);
          if (times(times(ta, tb), tc) != times(ta, times(tb, tc)))
            o.fail(pres.describe() + ": associativity fails at (" + std::to_string(a.id) + "," +
                   std::to_string(b.id) + "," + std::to_string(c.id) + ")");
        }
      }
    }
  }
  const double s = seconds_since(t0);
  if (s >= kAlgebraSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.pass)
    o.detail = std::to_string(triples) + " triples, " + std::to_string(pairs) + " pairs, " + std::to_string(s) + " s";
  return o;
}

double embedding_error(const KernelMatrix& k) {
  const auto f = schoenberg_embed(k, 0, kTol);
  double err = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      double s = 0;
      for (std::size_t c = 0; c < f[i].size(); ++c) s += (f[i][c] - f[j][c]) * (f[i][c] - f[j][c]);
      err = std::max(err, std::abs(s - k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
  }
  return err;
}

// 7. kernel suite
Outcome criterion7() {
  Outcome o;
  std::size_t accepted = 0, psis = 0;
  double worst = 0;
  auto embed_if_accepted = [&](const KernelMatrix& k) {
    if (!is_cnd(k, kTol).yes) return;
    ++accepted;
    worst = std::max(worst, embedding_error(k));
  };

  Eigen::MatrixXd path(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) path(i, j) = std::abs(i - j);
  const auto pk = make_kernel(path, kTol);
  if (!is_cnd(pk, kTol).yes) o.fail("path metric rejected");
  embed_if_accepted(pk);

  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  const auto nk = make_kernel(neg, kTol);
  const auto nv = is_cnd(nk, kTol);
  Rational wsum = 0, wnorm = 0;
  for (double x : nv.witness) {
    wsum += Rational(x);
    wnorm += Rational(x) * Rational(x);
  }
  if (nv.yes || wsum != 0 || !(exact_quadratic_form(nk, nv.witness) > Rational(kTol) * wnorm))
    o.fail("(0, -1) kernel not rejected with a valid witness");

  std::mt19937_64 rng(7);
  for (const auto& pres : hecke_families()) {
    const auto table = expand_ball(pres, 4);
    // distance kernel round trip
    KernelMatrix dk;
    dk.points = ball_points(table, 2);
    const auto n = static_cast<Eigen::Index>(dk.points.size());
    dk.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        dk.values(i, j) = coset_distance(table, dk.points[static_cast<std::size_t>(i)],
                                         dk.points[static_cast<std::size_t>(j)]);
    const auto psi = kernel_to_biinvariant(dk, table, kTol);
    if (!std::holds_alternative<BiinvariantFunction>(psi)) {
      o.fail(pres.describe() + ": distance kernel not invariant");
      continue;
    }
    const auto back = biinvariant_to_kernel(std::get<BiinvariantFunction>(psi), table, 2);
    if (back.points != dk.points || back.values != dk.values) o.fail(pres.describe() + ": kernel round trip");
    embed_if_accepted(dk);

    // random involution-symmetric psi
    const auto dcs = double_cosets_up_to(table, 4);
    std::uniform_int_distribution<int> val(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
      BiinvariantFunction f;
      for (const auto& dc : dcs) {
        const std::size_t inv = *table.orbit_of(*table.find(invert(dc.rep)));
        if (inv < dc.id) continue;
        const int v = val(rng);
        if (v == 0) continue;
        f.values[dc.id] = v;
        f.values[inv] = v;
      }
      ++psis;
      const auto k = biinvariant_to_kernel(f, table, 2);
      int support = 0;
      for (const auto& [id, v] : f.values) support = std::max(support, table.orbits()[id].depth);
      if (propagation(k, table) != support) o.fail(pres.describe() + ": propagation differs from support");
      const auto r = kernel_to_biinvariant(k, table, kTol);
      if (!std::holds_alternative<BiinvariantFunction>(r) || std::get<BiinvariantFunction>(r).values != f.values)
        o.fail(pres.describe() + ": psi round trip");
      // zero-diagonal copy; embedded whenever it happens to be CND
      KernelMatrix shifted = k;
      shifted.values.diagonal().setZero();
      embed_if_accepted(shifted);
    }
  }
  if (worst > kEmbedTol) o.fail("embedding error " + std::to_string(worst));
  if (o.pass) {
    std::ostringstream d;
    d << accepted << " accepted kernels embedded (max error " << worst << "), " << psis << " random psi";
    o.detail = d.str();
  }
  return o;
}

// 8. the CLI matrix twice, with and without cache
Outcome criterion8() {
  Outcome o;
  const std::string root = HECKEPAIR_SOURCE_DIR;
  auto conf = [&](const std::string& n) { return root + "/configs/" + n; };
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("heckepair-acceptance-" + std::to_string(rd()));
  fs::create_directories(dir / "cache");
  {
    std::ofstream(dir / "path.csv") << "0,1,2,3\n1,0,1,2\n2,1,0,1\n3,2,1,0\n";
    std::ofstream(dir / "neg.csv") << "0,-1\n-1,0\n";
    std::ofstream(dir / "psi.json") << R"({"values":[{"rep":"a","value":1},{"rep":"a^-1","value":1}]})";
  }
  const auto p = [&](const std::string& f) { return (dir / f).string(); };
  std::vector<std::vector<std::string>> matrix;
  for (const auto* c : {"sl2_z_half.conf", "bs_2_3.conf", "bs_1_1.conf", "lamplighter_2.conf", "free2.conf"}) {
    matrix.push_back({"pair", "describe", conf(c)});
    matrix.push_back({"ball", conf(c), "--radius", "3"});
    matrix.push_back({"orbits", conf(c), "--radius", "3"});
    matrix.push_back({"hecke", conf(c), "--radius", "1"});
    matrix.push_back({"schlichting", conf(c), "--level", "2"});
  }
  matrix.push_back({"hecke", conf("bs_2_3.conf"), "--radius", "1", "--mul", "a", "a^-1"});
  matrix.push_back({"schlichting", conf("bs_2_3.conf"), "--level", "2", "--probe", "b,b^6"});
  matrix.push_back({"kernel", "check", p("path.csv"), "--cnd"});
  matrix.push_back({"kernel", "check", p("neg.csv")});
  matrix.push_back({"kernel", "check", p("path.csv"), "--pos"});
  matrix.push_back({"kernel", "embed", p("path.csv")});
  matrix.push_back({"kernel", "transfer", conf("bs_2_3.conf"), "--radius", "1", "--to-kernel", p("psi.json")});

  auto run_all = [&](bool cached) {
    std::string all;
    for (auto args : matrix) {
      if (cached) args.insert(args.begin(), {"--cache", (dir / "cache").string()});
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      all += "$ " + std::to_string(code) + "\n" + out.str();
    }
    return all;
  };
  const auto first = run_all(false);
  const auto second = run_all(false);
  const auto cold = run_all(true);
  const auto warm = run_all(true);
  if (first != second) o.fail("two runs differ");
  if (cold != first || warm != first) o.fail("cache changes output");
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (o.pass)
    o.detail = std::to_string(matrix.size()) + " commands, " + std::to_string(first.size()) + " bytes, identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
