#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sboxlon/lon.hpp"

namespace sboxlon {

/// Compressed adjacency over node positions (not ids) of a LON.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;  // sorted within each node

  std::size_t node_count() const noexcept { return offsets.size() - 1; }
  std::span<const std::uint32_t> neighbours(std::size_t v) const noexcept {
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
};

Adjacency make_adjacency(const LocalOptimaNetwork& lon);

enum class PathKind { exact, sampled, skip };
std::string_view to_string(PathKind kind);
PathKind parse_path_kind(std::string_view text);

struct PathMode {
  PathKind kind = PathKind::exact;
  std::size_t sources = 0;  // sampled only
  std::uint64_t seed = 0;   // sampled only
};

struct LonStatistics {
  std::size_t n_v = 0;
  std::size_t n_e = 0;
  /// Average degree, exactly 2 n_e / n_v.
  double z = 0.0;
  /// Mean local clustering; nodes of degree < 2 contribute 0.
  double C = 0.0;
  /// z / (n_v - 1): clustering of a random graph of equal size and mean degree.
  double C_r = 0.0;
  /// Mean shortest-path length over ordered connected pairs (u != v).
  std::optional<double> l;
  PathKind l_mode = PathKind::skip;
  std::size_t l_sources = 0;
  int pi = 0;
  std::size_t S = 0;
};

LonStatistics compute_stats(const LocalOptimaNetwork& lon, const PathMode& mode,
                            unsigned workers = 1);

/// Local clustering coefficient per node position.
std::vector<double> local_clustering(const Adjacency& adjacency);

/// Connected component label per node position; labels are 0..S-1 in order
/// of the smallest member position.
std::vector<std::uint32_t> connected_components(const Adjacency& adjacency);

struct PathSums {
  std::uint64_t total_distance = 0;
  std::uint64_t pairs = 0;
};

/// Sum of BFS distances from each source to every reachable other node.
/// Runs 64 sources per sweep with bitset frontiers.
PathSums path_sums(const Adjacency& adjacency, std::span<const std::uint32_t> sources,
                   unsigned workers = 1);

/// (k, P(K >= k)) for every observed degree k, ascending.
std::vector<std::pair<std::size_t, double>> cumulative_degree_distribution(
    const LocalOptimaNetwork& lon);

enum class CorrelationKind { degree_vs_basin, fitness_vs_basin };

struct CorrelationData {
  CorrelationKind kind;
  /// One (x, basin_size) pair per local optimum, in node order. x is the
  /// degree or the exact fitness value as a double.
  std::vector<std::pair<double, double>> pairs;
  /// Spearman rank correlation with average ranks for ties; absent when
  /// either coordinate is constant or fewer than two pairs exist.
  std::optional<double> spearman;
};

CorrelationData correlation_export(const BasinSet& basins, const LocalOptimaNetwork& lon,
                                   CorrelationKind kind);

/// Fractional (average) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

}  // namespace sboxlon
