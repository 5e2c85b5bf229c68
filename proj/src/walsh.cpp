#include "sboxlon/walsh.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace sboxlon {

std::vector<std::uint8_t> component_truth_table(const SBox& sbox, unsigned v) {
  if (v == 0 || v >= sbox.size()) {
    throw std::invalid_argument("component selector must satisfy 1 <= v < 2^n");
  }
  std::vector<std::uint8_t> tt(sbox.size());
  for (std::size_t x = 0; x < sbox.size(); ++x) {
    tt[x] = static_cast<std::uint8_t>(dot(v, sbox[x]));
  }
  return tt;
}

void fwht_inplace(std::span<std::int32_t> values) {
  const std::size_t size = values.size();
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t k = block; k < block + half; ++k) {
        const std::int32_t a = values[k];
        const std::int32_t b = values[k + half];
        values[k] = a + b;
        values[k + half] = a - b;
      }
    }
  }
}

std::vector<std::int32_t> walsh_row(std::span<const std::uint8_t> truth_table) {
  const std::size_t size = truth_table.size();
  if (size == 0 || (size & (size - 1)) != 0) {
    throw std::invalid_argument("walsh_row: truth table length must be a power of two");
  }
  std::vector<std::int32_t> out(size);
  for (std::size_t x = 0; x < size; ++x) out[x] = truth_table[x] ? -1 : 1;
  fwht_inplace(out);
  return out;
}

WalshSpectrum::WalshSpectrum(int n, std::vector<std::int32_t> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != rows() * cols()) {
    throw std::invalid_argument("WalshSpectrum: value count does not match (2^n-1) x 2^n");
  }
}

std::int32_t WalshSpectrum::max_abs() const noexcept {
  std::int32_t best = 0;
  for (auto w : values_) best = std::max(best, std::abs(w));
  return best;
}

std::int32_t WalshSpectrum::row_max_abs(unsigned v) const noexcept {
  std::int32_t best = 0;
  for (auto w : row(v)) best = std::max(best, std::abs(w));
  return best;
}

WalshSpectrum full_spectrum(const SBox& sbox) {
  const int n = sbox.bits();
  const std::size_t size = sbox.size();
  std::vector<std::int32_t> values((size - 1) * size);
  for (unsigned v = 1; v < size; ++v) {
    std::span<std::int32_t> row(values.data() + (v - 1) * size, size);
    for (std::size_t x = 0; x < size; ++x) row[x] = dot(v, sbox[x]) ? -1 : 1;
    fwht_inplace(row);
  }
  return WalshSpectrum(n, std::move(values));
}

void apply_swap_update(WalshSpectrum& spectrum, const SBox& before, std::size_t i,
                       std::size_t j) {
  if (i == j) throw std::invalid_argument("spectrum_update_swap: i == j");
  if (i >= before.size() || j >= before.size() || spectrum.bits() != before.bits()) {
    throw std::invalid_argument("spectrum_update_swap: index or width mismatch");
  }
  // Only cells with v.(F(i)^F(j)) = 1 and w.(i^j) = 1 move, each by
  // -4 * (-1)^(v.F(i) xor w.i).
  const unsigned fi = before[i];
  const unsigned diff_out = fi ^ before[j];
  const unsigned diff_in = static_cast<unsigned>(i ^ j);
  const std::size_t size = before.size();
  for (unsigned v = 1; v < size; ++v) {
    if (!dot(v, diff_out)) continue;
    auto row = spectrum.row(v);
    const int sv = dot(v, fi);
    for (unsigned w = 0; w < size; ++w) {
      if (!dot(w, diff_in)) continue;
      row[w] += (sv ^ dot(w, static_cast<unsigned>(i))) ? 4 : -4;
    }
  }
}

WalshSpectrum spectrum_update_swap(const WalshSpectrum& spectrum, const SBox& before,
                                   std::size_t i, std::size_t j) {
  WalshSpectrum out = spectrum;
  apply_swap_update(out, before, i, j);
  return out;
}

}  // namespace sboxlon
