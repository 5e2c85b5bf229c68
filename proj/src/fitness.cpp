#include "sboxlon/fitness.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sboxlon {

std::string_view to_string(FitnessKind kind) {
  return kind == FitnessKind::nl ? "NL" : "NL_f";
}

FitnessKind parse_fitness_kind(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (c != '_') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "nl") return FitnessKind::nl;
  if (lower == "nlf") return FitnessKind::nl_f;
  throw std::invalid_argument("unknown fitness kind '" + std::string(text) + "'");
}

int nonlinearity(const WalshSpectrum& spectrum) {
  return nonlinearity_from_max_abs(spectrum.bits(), spectrum.max_abs());
}

int nonlinearity(const SBox& sbox) { return nonlinearity(full_spectrum(sbox)); }

int scv_bound(int n) {
  if (n < 3) throw std::invalid_argument("scv_bound: n must be at least 3");
  const int half = (n % 2 == 1) ? (n - 1) / 2 : n / 2;
  return (1 << (n - 1)) - (1 << half);
}

FitnessValue fitness(const WalshSpectrum& spectrum, FitnessKind kind) {
  std::int32_t global = 0;
  int count = 0;
  for (unsigned v = 1; v <= spectrum.rows(); ++v) {
    const std::int32_t m = spectrum.row_max_abs(v);
    if (m > global) {
      global = m;
      count = 1;
    } else if (m == global) {
      ++count;
    }
  }
  return make_fitness(kind, spectrum.bits(), global, count);
}

FitnessValue fitness(const SBox& sbox, FitnessKind kind) {
  return fitness(full_spectrum(sbox), kind);
}

}  // namespace sboxlon
