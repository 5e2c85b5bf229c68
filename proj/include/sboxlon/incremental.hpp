#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sboxlon/fitness.hpp"
#include "sboxlon/neighbourhood.hpp"
#include "sboxlon/sbox.hpp"
#include "sboxlon/walsh.hpp"

namespace sboxlon {

/// Current solution of a climb together with its exact Walsh spectrum, able
/// to score any neighbour without materialising it.
///
/// Swap neighbours: a swap changes every affected cell by exactly +-4, so the
/// neighbour's maximum is at least M - 4 where M is the current maximum.
/// Cells with |W| < M - 8 can therefore never reach the neighbour's maximum
/// and only the "critical" cells with |W| >= M - 8 are re-scored. The result
/// is exact, not an estimate.
///
/// Invert neighbours: the spectrum of the reversed table is rebuilt with the
/// butterfly, aborting as soon as the neighbour provably cannot beat the
/// supplied bar.
class SpectrumTracker {
 public:
  SpectrumTracker(const SBox& start, FitnessKind kind);

  int bits() const noexcept { return n_; }
  FitnessKind kind() const noexcept { return kind_; }
  const std::vector<std::uint8_t>& table() const noexcept { return table_; }
  SBox sbox() const { return SBox(n_, table_); }
  const WalshSpectrum& spectrum() const noexcept { return spectrum_; }
  FitnessValue fitness() const noexcept { return fitness_; }

  /// Exact fitness of the neighbour reached by `move`.
  FitnessValue evaluate(Move move) const;

  /// Fitness of the neighbour if it strictly exceeds `bar`, otherwise
  /// nullopt. May skip work for neighbours that cannot win.
  std::optional<FitnessValue> evaluate_if_better(Move move, FitnessValue bar) const;

  /// Moves the current solution to its neighbour and updates the spectrum.
  void apply(Move move);

 private:
  FitnessValue evaluate_swap(unsigned i, unsigned j) const;
  std::optional<FitnessValue> evaluate_invert(Move move, const FitnessValue* bar) const;
  void refresh();

  int n_;
  FitnessKind kind_;
  std::vector<std::uint8_t> table_;
  WalshSpectrum spectrum_;
  FitnessValue fitness_;
  std::int32_t max_abs_ = 0;
  // Critical cells grouped by row, structure-of-arrays.
  std::vector<std::uint16_t> cell_row_;
  std::vector<std::uint16_t> cell_col_;
  std::vector<std::int32_t> cell_value_;
};

}  // namespace sboxlon
