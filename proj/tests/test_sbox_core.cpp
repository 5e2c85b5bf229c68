#include <numeric>

#include "doctest.h"
#include "oracles.hpp"

using namespace sboxlon;

namespace {

// x -> x^{-1} in GF(2^3) modulo x^3 + x + 1, with 0 -> 0.
SBox inverse_3x3() { return SBox(3, {0, 1, 5, 6, 7, 2, 3, 4}); }

}  // namespace

TEST_CASE("sbox construction validates width, length and bijectivity") {
  CHECK_NOTHROW(SBox(3, {0, 1, 2, 3, 4, 5, 6, 7}));
  CHECK_THROWS_AS(SBox(3, {0, 1, 2, 3, 4, 5, 6, 6}), std::invalid_argument);
  CHECK_THROWS_AS(SBox(3, {0, 1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(SBox(9, std::vector<std::uint8_t>(512)), std::invalid_argument);
  CHECK_THROWS_AS(SBox(1, {0, 1}), std::invalid_argument);
  CHECK(is_permutation(std::vector<std::uint8_t>{2, 0, 1, 3}));
  CHECK_FALSE(is_permutation(std::vector<std::uint8_t>{2, 0, 2, 3}));
}

TEST_CASE("text and key encodings round-trip") {
  Rng rng(11);
  for (int n = 2; n <= 8; ++n) {
    const SBox s = oracle::random_sbox(n, rng);
    CHECK(SBox::from_text(s.to_text()) == s);
    CHECK(SBox::from_key(n, s.key()) == s);
    CHECK(SBox::from_text(s.to_text()).bits() == n);
  }
  CHECK_THROWS(SBox::from_text("0 1 x 3"));
}

TEST_CASE("component truth tables") {
  const SBox id = SBox::identity(3);
  CHECK(component_truth_table(id, 1) == std::vector<std::uint8_t>{0, 1, 0, 1, 0, 1, 0, 1});
  const SBox flipped(3, {1, 0, 3, 2, 5, 4, 7, 6});
  CHECK(component_truth_table(flipped, 1) == std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0, 1, 0});
  CHECK_THROWS_AS(component_truth_table(id, 0), std::invalid_argument);
  CHECK_THROWS_AS(component_truth_table(id, 8), std::invalid_argument);

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 5;
    const SBox s = oracle::random_sbox(n, rng);
    for (unsigned v = 1; v < s.size(); ++v) {
      const auto t = component_truth_table(s, v);
      CHECK(std::accumulate(t.begin(), t.end(), 0u) == s.size() / 2);
    }
  }
}

TEST_CASE("walsh_row on simple functions") {
  const auto zero = walsh_row(std::vector<std::uint8_t>(8, 0));
  CHECK(zero[0] == 8);
  for (int w = 1; w < 8; ++w) CHECK(zero[w] == 0);

  const auto linear = walsh_row(std::vector<std::uint8_t>{0, 1, 0, 1, 0, 1, 0, 1});
  for (int w = 0; w < 8; ++w) CHECK(std::abs(linear[w]) == (w == 1 ? 8 : 0));

  CHECK_THROWS_AS(walsh_row(std::vector<std::uint8_t>(6, 0)), std::invalid_argument);
}

TEST_CASE("walsh_row matches the naive double loop on every length-8 table") {
  for (unsigned bits = 0; bits < 256; ++bits) {
    std::vector<std::uint8_t> f(8);
    for (int x = 0; x < 8; ++x) f[x] = (bits >> x) & 1;
    REQUIRE(walsh_row(f) == oracle::walsh(f));
  }
}

TEST_CASE("walsh_row matches the naive double loop on random tables") {
  Rng rng(2024);
  for (int n = 4; n <= 7; ++n) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<std::uint8_t> f(std::size_t{1} << n);
      for (auto& b : f) b = rng() & 1;
      REQUIRE(walsh_row(f) == oracle::walsh(f));
    }
  }
}

TEST_CASE("full spectrum: identity, inverse and oracle agreement") {
  const auto id = full_spectrum(SBox::identity(3));
  for (unsigned v = 1; v < 8; ++v) {
    int big = 0;
    for (auto w : id.row(v)) big += std::abs(w) == 8;
    CHECK(big == 1);
  }
  CHECK(full_spectrum(inverse_3x3()).max_abs() == 4);

  Rng rng(5);
  for (int n = 3; n <= 6; ++n) {
    const SBox s = oracle::random_sbox(n, rng);
    const auto fast = full_spectrum(s);
    const auto slow = oracle::spectrum(s);
    for (unsigned v = 1; v < s.size(); ++v) {
      CHECK(std::vector<std::int32_t>(fast.row(v).begin(), fast.row(v).end()) == slow[v - 1]);
    }
  }
}

TEST_CASE("spectrum invariants: parity, bounds, Parseval, balance") {
  Rng rng(99);
  for (int n = 3; n <= 7; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const SBox s = oracle::random_sbox(n, rng);
      const auto ws = full_spectrum(s);
      const std::int64_t size = std::int64_t{1} << n;
      for (unsigned v = 1; v < s.size(); ++v) {
        std::int64_t energy = 0;
        for (auto w : ws.row(v)) {
          CHECK(w % 2 == 0);
          CHECK(std::abs(w) <= size);
          energy += std::int64_t{w} * w;
        }
        CHECK(energy == size * size);
        CHECK(ws.at(v, 0) == 0);
      }
      const int nl = nonlinearity(ws);
      CHECK(nl % 2 == 0);
      CHECK(nl <= scv_bound(n));
    }
  }
}

TEST_CASE("swap update") {
  Rng rng(17);
  SUBCASE("swap and swap back restores the spectrum") {
    const SBox s = oracle::random_sbox(4, rng);
    const auto before = full_spectrum(s);
    const auto once = spectrum_update_swap(before, s, 3, 9);
    const auto twice = spectrum_update_swap(once, apply_move(s, Move{MoveKind::swap, 3, 9}), 3, 9);
    CHECK(twice == before);
  }
  SUBCASE("rows whose outputs agree at i and j are unchanged") {
    const SBox s = oracle::random_sbox(4, rng);
    const auto before = full_spectrum(s);
    const auto after = spectrum_update_swap(before, s, 2, 11);
    for (unsigned v = 1; v < 16; ++v) {
      if (dot(v, s[2]) == dot(v, s[11])) {
        CHECK(std::equal(before.row(v).begin(), before.row(v).end(), after.row(v).begin()));
      }
    }
  }
  SUBCASE("matches full recomputation") {
    for (int n = 4; n <= 6; ++n) {
      SBox s = oracle::random_sbox(n, rng);
      auto ws = full_spectrum(s);
      for (int trial = 0; trial < 300; ++trial) {
        const auto i = static_cast<std::uint16_t>(rng.uniform_below(s.size()));
        auto j = static_cast<std::uint16_t>(rng.uniform_below(s.size() - 1));
        if (j >= i) ++j;
        apply_swap_update(ws, s, i, j);
        s = apply_move(s, Move{MoveKind::swap, std::min(i, j), std::max(i, j)});
        REQUIRE(ws == full_spectrum(s));
      }
    }
  }
  CHECK_THROWS_AS(spectrum_update_swap(full_spectrum(SBox::identity(3)), SBox::identity(3), 2, 2),
                  std::invalid_argument);
}

TEST_CASE("nonlinearity and the SCV bound") {
  CHECK(nonlinearity(SBox::identity(3)) == 0);
  CHECK(nonlinearity(inverse_3x3()) == 2);
  CHECK(scv_bound(3) == 2);
  CHECK(scv_bound(4) == 4);
  CHECK(scv_bound(5) == 12);
  CHECK(scv_bound(6) == 24);
  CHECK(scv_bound(7) == 56);
  CHECK(scv_bound(9) == 240);
  CHECK_THROWS_AS(scv_bound(2), std::invalid_argument);
  Rng rng(8);
  for (int k = 0; k < 30; ++k) CHECK(nonlinearity(oracle::random_sbox(5, rng)) <= 12);
}

TEST_CASE("fitness values") {
  CHECK(fitness(SBox::identity(3), FitnessKind::nl).numerator() == 0);

  SUBCASE("NL_f matches brute-force component counts") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 3 + trial % 3;
      const SBox s = oracle::random_sbox(n, rng);
      const auto fast = fitness(s, FitnessKind::nl_f);
      const auto slow = oracle::fitness(s, FitnessKind::nl_f);
      CHECK(fast.nonlinearity == slow.nonlinearity);
      CHECK(fast.worst_components == slow.worst_components);
      CHECK(fast.numerator() == std::int64_t{slow.nonlinearity} * slow.worst_components + 1);
      CHECK(fitness(s, FitnessKind::nl).numerator() == slow.nonlinearity);
    }
  }

  SUBCASE("a single worst component gives N_F + 1") {
    // Search 3x3 S-boxes for one whose minimum is attained by exactly one component.
    SBox s = SBox::identity(3);
    bool found = false;
    for (int k = 0; k < 40320 && !found; ++k, s = lex_successor(s)) {
      if (oracle::fitness(s, FitnessKind::nl_f).worst_components == 1) found = true;
    }
    if (found) {
      const auto f = fitness(s, FitnessKind::nl_f);
      CHECK(f.numerator() == f.nonlinearity + 1);
      CHECK(f.denominator() == 1);
    } else {
      MESSAGE("no 3x3 S-box has a unique worst component");
    }
  }

  SUBCASE("rational ordering") {
    const FitnessValue a{FitnessKind::nl_f, 2, 3};  // 7/3
    const FitnessValue b{FitnessKind::nl_f, 2, 2};  // 5/2
    const FitnessValue c{FitnessKind::nl_f, 0, 1};  // 1
    CHECK(a < b);
    CHECK(c < a);
    CHECK(FitnessValue{FitnessKind::nl_f, 2, 6} == FitnessValue{FitnessKind::nl_f, 2, 6});
  }

  CHECK(parse_fitness_kind("NL_f") == FitnessKind::nl_f);
  CHECK(parse_fitness_kind("nlf") == FitnessKind::nl_f);
  CHECK(parse_fitness_kind("NL") == FitnessKind::nl);
  CHECK_THROWS(parse_fitness_kind("du"));
}
