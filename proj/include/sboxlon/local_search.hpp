#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sboxlon/fitness.hpp"
#include "sboxlon/incremental.hpp"
#include "sboxlon/neighbourhood.hpp"
#include "sboxlon/sbox.hpp"
#include "sboxlon/solution_archive.hpp"

namespace sboxlon {

struct ClimbOptions {
  FitnessKind fitness = FitnessKind::nl_f;
  MoveKind op = MoveKind::swap;
  /// Workers for one neighbourhood scan. The chosen move never depends on it.
  unsigned workers = 1;
};

/// Accepted-solution chain of one climb. chain[0] is the start and the
/// fitness values are strictly increasing along the chain.
struct Trajectory {
  std::vector<SBox> chain;
  std::vector<FitnessValue> fitness;
  /// Set when the climb stopped on an archived solution (chain.back()); the
  /// chain then belongs to that basin. Unset when chain.back() is a local
  /// optimum reached without touching the archive.
  std::optional<std::uint32_t> merged_basin;

  const SBox& start() const { return chain.front(); }
  const SBox& terminal() const { return chain.back(); }
  bool reached_new_optimum() const noexcept { return !merged_basin.has_value(); }
  std::size_t accepted_moves() const noexcept { return chain.size() - 1; }
};

/// Text form used to compare trajectories byte for byte.
std::string serialize(const Trajectory& trajectory);

/// Index into `moves` of the best strictly improving move, ties broken by
/// the smallest index. Parallel scans reduce to the same answer.
std::optional<std::size_t> best_improving_move(const SpectrumTracker& current,
                                               std::span<const Move> moves, unsigned workers);

/// Greedy deterministic hill climber: each scan picks the best strictly
/// improving neighbour (first in enumeration order among equals) and the
/// climb stops when no neighbour is strictly better.
Trajectory hill_climb(const SBox& start, const ClimbOptions& options);

/// hill_climb that stops as soon as the start or a newly accepted solution
/// is found in `archive`, reporting that solution's basin.
Trajectory hill_climb_memoized(const SBox& start, const SolutionArchive& archive,
                               const ClimbOptions& options);

/// Reference check by brute force: no neighbour (recomputed from scratch)
/// has strictly greater fitness.
bool is_local_optimum(const SBox& sbox, FitnessKind fitness, MoveKind op);

}  // namespace sboxlon
