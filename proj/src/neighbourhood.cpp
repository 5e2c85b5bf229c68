#include "sboxlon/neighbourhood.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sboxlon/rng.hpp"

namespace sboxlon {

std::string_view to_string(MoveKind kind) { return kind == MoveKind::swap ? "swap" : "invert"; }

MoveKind parse_move_kind(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "swap") return MoveKind::swap;
  if (lower == "invert") return MoveKind::invert;
  throw std::invalid_argument("unknown operator '" + std::string(text) + "'");
}

std::size_t neighbourhood_size(int n) {
  const std::size_t size = std::size_t{1} << n;
  return size * (size - 1) / 2;
}

void apply_move_inplace(std::span<std::uint8_t> table, Move move) {
  if (move.i >= move.j || move.j >= table.size()) {
    throw std::invalid_argument("move: indices must satisfy i < j < 2^n");
  }
  if (move.kind == MoveKind::swap) {
    std::swap(table[move.i], table[move.j]);
  } else {
    std::reverse(table.begin() + move.i, table.begin() + move.j + 1);
  }
}

SBox apply_move(const SBox& sbox, Move move) {
  std::vector<std::uint8_t> table(sbox.table().begin(), sbox.table().end());
  apply_move_inplace(table, move);
  return SBox(sbox.bits(), std::move(table));
}

std::vector<Move> enumerate_moves(int n, MoveKind kind) {
  if (n < kMinBits || n > kMaxBits) throw std::invalid_argument("enumerate_moves: n outside [2, 8]");
  const std::size_t size = std::size_t{1} << n;
  std::vector<Move> moves;
  moves.reserve(neighbourhood_size(n));
  for (std::size_t i = 0; i + 1 < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      moves.push_back(Move{kind, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)});
    }
  }
  return moves;
}

SBox lex_successor(const SBox& sbox) {
  std::vector<std::uint8_t> table(sbox.table().begin(), sbox.table().end());
  std::next_permutation(table.begin(), table.end());  // wraps to ascending after the last
  return SBox(sbox.bits(), std::move(table));
}

SBox random_permutation(int n, std::uint64_t seed) {
  if (n < kMinBits || n > kMaxBits) throw std::invalid_argument("random_permutation: n outside [2, 8]");
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  std::iota(table.begin(), table.end(), std::uint8_t{0});
  Rng rng(seed);
  for (std::size_t k = table.size() - 1; k > 0; --k) {
    std::swap(table[k], table[rng.uniform_below(k + 1)]);
  }
  return SBox(n, std::move(table));
}

}  // namespace sboxlon
