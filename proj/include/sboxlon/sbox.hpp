#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sboxlon {

inline constexpr int kMinBits = 2;
inline constexpr int kMaxBits = 8;

/// True when `table` holds every value of [0, table.size()) exactly once.
bool is_permutation(std::span<const std::uint8_t> table);

/// A bijective (n,n) S-box stored as a permutation of [0, 2^n - 1].
///
/// The constructor rejects anything that is not a permutation of the right
/// length, so every live SBox is bijective.
class SBox {
 public:
  SBox(int n, std::vector<std::uint8_t> table);

  static SBox identity(int n);

  /// Parses the canonical text encoding: 2^n whitespace-separated decimals.
  /// The bit-width is inferred from the entry count.
  static SBox from_text(std::string_view line);

  /// Inverse of key(): 2^n packed bytes.
  static SBox from_key(int n, std::string_view key);

  int bits() const noexcept { return n_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::span<const std::uint8_t> table() const noexcept { return table_; }
  std::uint8_t operator[](std::size_t x) const noexcept { return table_[x]; }

  /// Canonical text encoding (single line, no trailing newline).
  std::string to_text() const;

  /// Canonical binary key: the table packed as 2^n bytes.
  std::string key() const;

  friend bool operator==(const SBox&, const SBox&) = default;
  /// Lexicographic order of the tables (then by width).
  friend std::strong_ordering operator<=>(const SBox& a, const SBox& b);

 private:
  int n_;
  std::vector<std::uint8_t> table_;
};

}  // namespace sboxlon
