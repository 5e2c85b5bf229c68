#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sboxlon/sbox.hpp"

namespace sboxlon {

enum class MoveKind { swap, invert };

std::string_view to_string(MoveKind kind);
MoveKind parse_move_kind(std::string_view text);

/// One neighbourhood move on positions i < j (0-based).
///   swap:   exchange table[i] and table[j]
///   invert: reverse the segment table[i..j] inclusive
struct Move {
  MoveKind kind = MoveKind::swap;
  std::uint16_t i = 0;
  std::uint16_t j = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

/// 2^n (2^n - 1) / 2, identical for both operators.
std::size_t neighbourhood_size(int n);

/// Applies `move` in place. Throws on i >= j or out-of-range indices.
void apply_move_inplace(std::span<std::uint8_t> table, Move move);
SBox apply_move(const SBox& sbox, Move move);

/// All moves, ascending i then ascending j. This order is the tie-break
/// order of the hill climber.
std::vector<Move> enumerate_moves(int n, MoveKind kind);

/// Next permutation in lexicographic order of the table; the descending
/// table wraps to the ascending one.
SBox lex_successor(const SBox& sbox);

/// Uniform permutation from Rng(seed) by Fisher-Yates: for k = N-1 down to 1,
/// swap entry k with entry uniform_below(k + 1).
SBox random_permutation(int n, std::uint64_t seed);

}  // namespace sboxlon
