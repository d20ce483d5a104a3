#include <random>

#include "doctest.h"
#include "heckepair/error.hpp"
#include "heckepair/presentation.hpp"
#include "oracles.hpp"

using namespace heckepair;

namespace {

std::vector<PairPresentation> all_pairs() {
  return {make_sl2_pair({2}), make_sl2_pair({2, 3}), make_baumslag_solitar_pair(2, 3),
          make_baumslag_solitar_pair(1, 1), make_baumslag_solitar_pair(3, 5), make_lamplighter_pair(2, 8),
          make_lamplighter_pair(3, 8), make_free2_pair()};
}

}  // namespace

TEST_CASE("group axioms on random triples") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> len(0, 6);
  for (const auto& pres : all_pairs()) {
    CAPTURE(pres.describe());
    const GroupElement e = pres.identity();
    for (int t = 0; t < 1000; ++t) {
      const auto a = oracle::random_word(pres, len(rng), rng);
      const auto b = oracle::random_word(pres, len(rng), rng);
      const auto c = oracle::random_word(pres, len(rng), rng);
      REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
      REQUIRE(multiply(a, e) == a);
      REQUIRE(multiply(e, a) == a);
      REQUIRE(is_identity(multiply(a, invert(a))));
      REQUIRE(is_identity(multiply(invert(a), a)));
    }
  }
}

TEST_CASE("serialize round trip") {
  std::mt19937_64 rng(7);
  for (const auto& pres : all_pairs()) {
    for (int t = 0; t < 200; ++t) {
      const auto g = oracle::random_word(pres, 8, rng);
      REQUIRE(deserialize(serialize(g), pres.identity()) == g);
    }
  }
  CHECK_THROWS_AS(deserialize("nonsense here", make_baumslag_solitar_pair(2, 3).identity()), InvalidInput);
}

TEST_CASE("family mismatch is rejected") {
  const auto bs = make_baumslag_solitar_pair(2, 3);
  const auto other = make_baumslag_solitar_pair(1, 1);
  const auto sl = make_sl2_pair({2});
  CHECK_THROWS_AS(multiply(bs.identity(), sl.identity()), InvalidInput);
  CHECK_THROWS_AS(multiply(bs.parse_word("a"), other.parse_word("a")), InvalidInput);
  CHECK_FALSE(same_family(bs.identity(), other.identity()));
}

TEST_CASE("Baumslag-Solitar relations and normal form") {
  const auto pres = make_baumslag_solitar_pair(2, 3);
  CHECK(pres.parse_word("a^-1 b^2 a") == pres.parse_word("b^3"));
  CHECK(pres.parse_word("a b^3 a^-1") == pres.parse_word("b^2"));
  CHECK(pres.parse_word("a b a^-1") != pres.parse_word("b"));
  CHECK(pres.parse_word("a b^6 a^-1") == pres.parse_word("b^4"));
  CHECK(is_identity(pres.parse_word("a a^-1 b b^-1")));
  // normal form is unique: the same element built two ways compares equal
  CHECK(pres.parse_word("b^5 a") == pres.parse_word("b a b^6"));
  const auto g = std::get<BsElt>(pres.parse_word("b^5 a"));
  REQUIRE(g.letters.size() == 1);
  CHECK(g.letters[0].b_power == 1);
  CHECK(g.tail == 6);
}

TEST_CASE("Baumslag-Solitar word lengths against forward search") {
  const auto pres = make_baumslag_solitar_pair(2, 3);
  CHECK(element_length(pres, pres.parse_word("a b^3 a^-1"), 100000) == std::optional<std::size_t>(2));
  CHECK(oracle::forward_bfs_length(pres, pres.parse_word("a b^3 a^-1"), 4) == std::optional<int>(2));
  std::mt19937_64 rng(99);
  for (int t = 0; t < 60; ++t) {
    const auto g = oracle::random_word(pres, 5, rng);
    const auto fwd = oracle::forward_bfs_length(pres, g, 5);
    REQUIRE(fwd.has_value());
    CHECK(element_length(pres, g, 1000000) == std::optional<std::size_t>(static_cast<std::size_t>(*fwd)));
  }
}

TEST_CASE("SL2 arithmetic") {
  const auto pres = make_sl2_pair({2});
  const auto d = std::get<MatrixElt>(pres.parse_word("D2"));
  CHECK(d == matrix::make(2, 0, 0, Rational(1, 2)));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t)
    CHECK(matrix::determinant(std::get<MatrixElt>(oracle::random_word(pres, 7, rng))) == 1);
  // S^2 = -I
  CHECK(pres.parse_word("S S") == GroupElement(matrix::make(-1, 0, 0, -1)));
  CHECK_THROWS_AS(make_sl2_pair({4}), InvalidInput);
  CHECK_THROWS_AS(make_sl2_pair({}), InvalidInput);
}

TEST_CASE("wreath product law") {
  const auto pres = make_lamplighter_pair(3, 8);
  const auto g = std::get<WreathElt>(pres.parse_word("t x t^-1"));
  CHECK(g.shift == 0);
  REQUIRE(g.lamps.size() == 1);
  CHECK(g.lamps.begin()->first == 1);
  CHECK(is_identity(pres.parse_word("x x x")));
  CHECK(pres.in_lambda(pres.parse_word("t^2 x t^-2")));
  CHECK_FALSE(pres.in_lambda(pres.parse_word("t^-1 x t")));
}

TEST_CASE("parse_word errors") {
  const auto pres = make_baumslag_solitar_pair(2, 3);
  CHECK_THROWS_AS(pres.parse_word("c"), InvalidInput);
  CHECK_THROWS_AS(pres.parse_word("a^"), InvalidInput);
  CHECK_THROWS_AS(pres.parse_word("a^x"), InvalidInput);
  CHECK(is_identity(pres.parse_word("e")));
  CHECK(is_identity(pres.parse_word("")));
}

TEST_CASE("coset keys decide membership") {
  std::mt19937_64 rng(11);
  for (const auto& pres : all_pairs()) {
    CAPTURE(pres.describe());
    for (int t = 0; t < 400; ++t) {
      const auto g = oracle::random_word(pres, 5, rng);
      const auto h = t % 2 ? multiply(g, oracle::random_lambda_word(pres, 4, rng)) : oracle::random_word(pres, 5, rng);
      REQUIRE((pres.coset_key(g) == pres.coset_key(h)) == pres.in_lambda(multiply(invert(g), h)));
    }
  }
}

TEST_CASE("presentation validation") {
  CHECK_THROWS_AS(make_baumslag_solitar_pair(0, 3), InvalidInput);
  CHECK_THROWS_AS(make_lamplighter_pair(1, 8), InvalidInput);
  for (const auto& pres : all_pairs())
    for (const auto& l : pres.lambda_generators()) CHECK(pres.in_lambda(l.element));
}
