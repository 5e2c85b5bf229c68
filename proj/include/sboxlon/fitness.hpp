#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "sboxlon/sbox.hpp"
#include "sboxlon/walsh.hpp"

namespace sboxlon {

enum class FitnessKind { nl, nl_f };

std::string_view to_string(FitnessKind kind);
/// Accepts "NL" and "NL_f" (case-insensitive, "NLf" also accepted).
FitnessKind parse_fitness_kind(std::string_view text);

/// Exact fitness value. For NL the value is the nonlinearity N_F. For NL_f it
/// is N_F + 1/c where c counts the components attaining the minimum
/// nonlinearity; it is kept as the rational (N_F*c + 1)/c.
struct FitnessValue {
  FitnessKind kind = FitnessKind::nl;
  int nonlinearity = 0;
  int worst_components = 1;

  std::int64_t numerator() const noexcept {
    return kind == FitnessKind::nl ? nonlinearity
                                   : std::int64_t{nonlinearity} * worst_components + 1;
  }
  std::int64_t denominator() const noexcept {
    return kind == FitnessKind::nl ? 1 : worst_components;
  }
  double as_double() const noexcept {
    return static_cast<double>(numerator()) / static_cast<double>(denominator());
  }

  friend std::strong_ordering operator<=>(const FitnessValue& a, const FitnessValue& b) noexcept {
    return a.numerator() * b.denominator() <=> b.numerator() * a.denominator();
  }
  friend bool operator==(const FitnessValue& a, const FitnessValue& b) noexcept {
    return (a <=> b) == 0;
  }
};

/// 2^{n-1} - max|W|/2 for a single component (or the whole S-box).
inline int nonlinearity_from_max_abs(int n, std::int32_t max_abs) noexcept {
  return (1 << (n - 1)) - max_abs / 2;
}

int nonlinearity(const SBox& sbox);
int nonlinearity(const WalshSpectrum& spectrum);

/// Best known nonlinearity ceiling: 2^{n-1} - 2^{(n-1)/2} for odd n and
/// 2^{n-1} - 2^{n/2} for even n. Requires n >= 3.
int scv_bound(int n);

FitnessValue fitness(const SBox& sbox, FitnessKind kind);
FitnessValue fitness(const WalshSpectrum& spectrum, FitnessKind kind);

/// Fitness from the global max |W| and the number of rows attaining it.
inline FitnessValue make_fitness(FitnessKind kind, int n, std::int32_t max_abs, int rows_at_max) {
  return FitnessValue{kind, nonlinearity_from_max_abs(n, max_abs), rows_at_max};
}

}  // namespace sboxlon
