#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sboxlon/sbox.hpp"

namespace sboxlon {

/// Parity of the bitwise AND, i.e. the inner product over F_2 of two
/// integer-encoded vectors (bit k is coordinate k+1).
inline int dot(unsigned a, unsigned b) noexcept { return __builtin_parity(a & b); }

/// Truth table of the component function x -> v . F(x), in natural order.
/// Throws std::invalid_argument unless 1 <= v < 2^n.
std::vector<std::uint8_t> component_truth_table(const SBox& sbox, unsigned v);

/// In-place fast Walsh-Hadamard butterfly over a power-of-two length buffer.
void fwht_inplace(std::span<std::int32_t> values);

/// Walsh spectrum W(w) = sum_x (-1)^(f(x) xor w.x) of one Boolean function.
/// O(N log N) butterfly; throws on a non-power-of-two length.
std::vector<std::int32_t> walsh_row(std::span<const std::uint8_t> truth_table);

/// Dense (2^n - 1) x 2^n table of component Walsh values. Row r holds the
/// component selected by v = r + 1.
class WalshSpectrum {
 public:
  WalshSpectrum() = default;
  WalshSpectrum(int n, std::vector<std::int32_t> values);

  int bits() const noexcept { return n_; }
  std::size_t rows() const noexcept { return (std::size_t{1} << n_) - 1; }
  std::size_t cols() const noexcept { return std::size_t{1} << n_; }

  /// Row for selector v (1 <= v < 2^n).
  std::span<const std::int32_t> row(unsigned v) const noexcept {
    return {values_.data() + (v - 1) * cols(), cols()};
  }
  std::span<std::int32_t> row(unsigned v) noexcept {
    return {values_.data() + (v - 1) * cols(), cols()};
  }
  std::int32_t at(unsigned v, unsigned w) const noexcept { return values_[(v - 1) * cols() + w]; }
  std::span<const std::int32_t> values() const noexcept { return values_; }

  /// Largest |W| over all rows and columns.
  std::int32_t max_abs() const noexcept;
  /// Largest |W| within row v.
  std::int32_t row_max_abs(unsigned v) const noexcept;

  friend bool operator==(const WalshSpectrum&, const WalshSpectrum&) = default;

 private:
  int n_ = 0;
  std::vector<std::int32_t> values_;
};

WalshSpectrum full_spectrum(const SBox& sbox);

/// Rewrites `spectrum` (exact for `before`) into the spectrum of `before`
/// with entries i and j exchanged. Touches only the cells whose x=i and x=j
/// summands actually change: O(2^{2n}) with no log factor.
void apply_swap_update(WalshSpectrum& spectrum, const SBox& before, std::size_t i, std::size_t j);

/// Value-returning form of apply_swap_update. Rejects i == j.
WalshSpectrum spectrum_update_swap(const WalshSpectrum& spectrum, const SBox& before,
                                   std::size_t i, std::size_t j);

}  // namespace sboxlon
