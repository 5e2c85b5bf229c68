#include <set>

#include "doctest.h"
#include "oracles.hpp"

using namespace sboxlon;

TEST_CASE("apply_move examples") {
  std::vector<std::uint8_t> t{0, 1, 2, 3};
  apply_move_inplace(t, Move{MoveKind::swap, 0, 2});
  CHECK(t == std::vector<std::uint8_t>{2, 1, 0, 3});

  std::vector<std::uint8_t> u{0, 1, 2, 3, 4};
  apply_move_inplace(u, Move{MoveKind::invert, 1, 3});
  CHECK(u == std::vector<std::uint8_t>{0, 3, 2, 1, 4});

  CHECK_THROWS_AS(apply_move_inplace(u, Move{MoveKind::swap, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(apply_move_inplace(u, Move{MoveKind::swap, 3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(apply_move_inplace(u, Move{MoveKind::swap, 1, 5}), std::invalid_argument);
}

TEST_CASE("adjacent inversion equals adjacent swap") {
  Rng rng(4);
  const SBox s = oracle::random_sbox(4, rng);
  for (std::uint16_t i = 0; i + 1 < 16; ++i) {
    CHECK(apply_move(s, Move{MoveKind::invert, i, std::uint16_t(i + 1)}) ==
          apply_move(s, Move{MoveKind::swap, i, std::uint16_t(i + 1)}));
  }
}

TEST_CASE("move enumeration order and size") {
  const auto moves = enumerate_moves(3, MoveKind::swap);
  REQUIRE(moves.size() == 28);
  CHECK(moves[0] == Move{MoveKind::swap, 0, 1});
  CHECK(moves[1] == Move{MoveKind::swap, 0, 2});
  CHECK(moves[2] == Move{MoveKind::swap, 0, 3});
  CHECK(enumerate_moves(4, MoveKind::invert).size() == 120);
  CHECK(enumerate_moves(7, MoveKind::swap).size() == 8128);
  for (int n = 2; n <= 8; ++n) {
    const std::size_t size = std::size_t{1} << n;
    CHECK(neighbourhood_size(n) == size * (size - 1) / 2);
    CHECK(enumerate_moves(n, MoveKind::invert).size() == neighbourhood_size(n));
  }
}

TEST_CASE("moves preserve bijectivity, are involutions and are symmetric") {
  Rng rng(10);
  for (auto kind : {MoveKind::swap, MoveKind::invert}) {
    const SBox s = oracle::random_sbox(4, rng);
    std::set<std::string> neighbours;
    for (const auto& m : enumerate_moves(4, kind)) {
      const SBox t = apply_move(s, m);  // constructor re-validates bijectivity
      CHECK(apply_move(t, m) == s);
      neighbours.insert(t.key());
      bool back = false;
      for (const auto& m2 : enumerate_moves(4, kind)) back = back || apply_move(t, m2) == s;
      CHECK(back);
    }
    CHECK(neighbours.size() == neighbourhood_size(4));
  }
}

TEST_CASE("lexicographic successor") {
  CHECK(lex_successor(SBox(2, {0, 1, 3, 2})) == SBox(2, {0, 2, 1, 3}));
  CHECK(lex_successor(SBox(2, {3, 2, 1, 0})) == SBox(2, {0, 1, 2, 3}));

  const SBox start = random_permutation(3, 77);
  std::set<std::string> seen;
  SBox s = start;
  for (int k = 0; k < 40320; ++k) {
    seen.insert(s.key());
    s = lex_successor(s);
  }
  CHECK(s == start);
  CHECK(seen.size() == 40320);
}

TEST_CASE("seeded random permutations") {
  for (int n = 3; n <= 8; ++n) CHECK(random_permutation(n, 42) == random_permutation(n, 42));
  int differ = 0;
  for (std::uint64_t k = 0; k < 100; ++k) differ += random_permutation(5, 2 * k) != random_permutation(5, 2 * k + 1);
  CHECK(differ == 100);
  // Pinned value: guards the PRNG and shuffle against silent changes.
  CHECK(random_permutation(3, 1).to_text() == "7 0 1 4 3 2 6 5");
  CHECK(random_permutation(4, 2024).to_text() == "0 8 11 10 1 6 4 5 7 2 13 12 15 9 3 14");
  CHECK(parse_move_kind("invert") == MoveKind::invert);
  CHECK_THROWS(parse_move_kind("rotate"));
}

TEST_CASE("rng reference values") {
  // xoshiro256** seeded through SplitMix64 from 0; matches the reference C code.
  Rng rng(0);
  std::uint64_t sm = 0;
  const std::uint64_t s0 = splitmix64(sm);
  CHECK(s0 == 0xe220a8397b1dcdafULL);
  CHECK(rng() == 0x99ec5f36cb75f2b4ULL);
  CHECK(rng() == 0xbf6e1f784956452aULL);
  Rng a(5), b(5);
  for (int k = 0; k < 100; ++k) CHECK(a() == b());
  Rng c(9);
  for (int k = 0; k < 1000; ++k) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.uniform_below(7) < 7);
  }
}
