#include "sboxlon/incremental.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace sboxlon {

SpectrumTracker::SpectrumTracker(const SBox& start, FitnessKind kind)
    : n_(start.bits()),
      kind_(kind),
      table_(start.table().begin(), start.table().end()),
      spectrum_(full_spectrum(start)) {
  refresh();
}

void SpectrumTracker::refresh() {
  fitness_ = sboxlon::fitness(spectrum_, kind_);
  max_abs_ = spectrum_.max_abs();
  cell_row_.clear();
  cell_col_.clear();
  cell_value_.clear();
  const std::int32_t floor = max_abs_ - 8;
  const unsigned size = 1u << n_;
  for (unsigned v = 1; v < size; ++v) {
    auto row = spectrum_.row(v);
    for (unsigned w = 0; w < size; ++w) {
      if (std::abs(row[w]) >= floor) {
        cell_row_.push_back(static_cast<std::uint16_t>(v));
        cell_col_.push_back(static_cast<std::uint16_t>(w));
        cell_value_.push_back(row[w]);
      }
    }
  }
}

FitnessValue SpectrumTracker::evaluate_swap(unsigned i, unsigned j) const {
  const unsigned fi = table_[i];
  const unsigned diff_out = fi ^ table_[j];
  const unsigned diff_in = i ^ j;

  std::int32_t best = 0;
  int rows_at_best = 0;
  const std::size_t count = cell_value_.size();
  std::size_t k = 0;
  while (k < count) {
    const unsigned v = cell_row_[k];
    const bool row_moves = dot(v, diff_out);
    const int sv = dot(v, fi);
    std::int32_t row_best = 0;
    for (; k < count && cell_row_[k] == v; ++k) {
      std::int32_t value = cell_value_[k];
      const unsigned w = cell_col_[k];
      if (row_moves && dot(w, diff_in)) value += (sv ^ dot(w, i)) ? 4 : -4;
      row_best = std::max(row_best, std::abs(value));
    }
    if (row_best > best) {
      best = row_best;
      rows_at_best = 1;
    } else if (row_best == best) {
      ++rows_at_best;
    }
  }
  return make_fitness(kind_, n_, best, rows_at_best);
}

std::optional<FitnessValue> SpectrumTracker::evaluate_invert(Move move,
                                                             const FitnessValue* bar) const {
  thread_local std::vector<std::uint8_t> table;
  thread_local std::vector<std::int32_t> row;
  table.assign(table_.begin(), table_.end());
  apply_move_inplace(table, move);
  const unsigned size = 1u << n_;
  row.resize(size);

  std::int32_t best = 0;
  int rows_at_best = 0;
  for (unsigned v = 1; v < size; ++v) {
    for (unsigned x = 0; x < size; ++x) row[x] = dot(v, table[x]) ? -1 : 1;
    fwht_inplace(row);
    std::int32_t row_best = 0;
    for (auto w : row) row_best = std::max(row_best, std::abs(w));
    if (row_best > best) {
      best = row_best;
      rows_at_best = 1;
    } else if (row_best == best) {
      ++rows_at_best;
    }
    if (bar) {
      // Later rows can only lower N_F or add worst components.
      const int nl = nonlinearity_from_max_abs(n_, best);
      if (nl < bar->nonlinearity) return std::nullopt;
      if (nl == bar->nonlinearity &&
          (kind_ == FitnessKind::nl || rows_at_best >= bar->worst_components)) {
        return std::nullopt;
      }
    }
  }
  return make_fitness(kind_, n_, best, rows_at_best);
}

FitnessValue SpectrumTracker::evaluate(Move move) const {
  if (move.i >= move.j || move.j >= table_.size()) {
    throw std::invalid_argument("move: indices must satisfy i < j < 2^n");
  }
  if (move.kind == MoveKind::swap) return evaluate_swap(move.i, move.j);
  return *evaluate_invert(move, nullptr);
}

std::optional<FitnessValue> SpectrumTracker::evaluate_if_better(Move move, FitnessValue bar) const {
  if (move.kind == MoveKind::swap) {
    FitnessValue f = evaluate_swap(move.i, move.j);
    if (f > bar) return f;
    return std::nullopt;
  }
  auto f = evaluate_invert(move, &bar);
  if (f && *f > bar) return f;
  return std::nullopt;
}

void SpectrumTracker::apply(Move move) {
  if (move.kind == MoveKind::swap) {
    apply_swap_update(spectrum_, SBox(n_, table_), move.i, move.j);
    apply_move_inplace(table_, move);
  } else {
    apply_move_inplace(table_, move);
    spectrum_ = full_spectrum(SBox(n_, table_));
  }
  refresh();
}

}  // namespace sboxlon
