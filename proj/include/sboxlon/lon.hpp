#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sboxlon/fitness.hpp"
#include "sboxlon/local_search.hpp"
#include "sboxlon/neighbourhood.hpp"
#include "sboxlon/sbox.hpp"
#include "sboxlon/solution_archive.hpp"

namespace sboxlon {

/// One local optimum and the solutions the climber maps onto it.
struct Basin {
  std::uint32_t id = 0;
  SBox optimum;
  FitnessValue fitness;
  /// Indices into the owning archive, in insertion order.
  std::vector<std::uint32_t> members;

  std::size_t size() const noexcept { return members.size(); }
};

/// Disjoint basins of one experiment, backed by a single archive that maps
/// every member solution to its basin.
class BasinSet {
 public:
  BasinSet(int n, FitnessKind fitness, std::string experiment_id = {});

  int bits() const noexcept { return archive_.bits(); }
  FitnessKind fitness_kind() const noexcept { return fitness_; }
  const std::string& experiment_id() const noexcept { return experiment_id_; }
  const SolutionArchive& archive() const noexcept { return archive_; }
  const std::vector<Basin>& basins() const noexcept { return basins_; }
  std::size_t total_members() const noexcept { return archive_.size(); }

  /// Merges one trajectory: the terminal's basin (the referenced one, or the
  /// basin of the optimum, created on first sight) absorbs every chain
  /// solution not yet archived. Returns the basin id. A chain solution
  /// already owned by a different basin throws std::logic_error.
  std::uint32_t add(const Trajectory& trajectory);

  /// Low-level hooks used when reloading a persisted store.
  std::uint32_t create_basin(const SBox& optimum, FitnessValue fitness);
  bool add_member(std::span<const std::uint8_t> key, std::uint32_t basin);

 private:
  FitnessKind fitness_;
  std::string experiment_id_;
  SolutionArchive archive_;
  std::vector<Basin> basins_;
};

BasinSet accumulate(std::span<const Trajectory> trajectories, int n, FitnessKind fitness);

struct LonNode {
  std::uint32_t id = 0;
  FitnessValue fitness;
  std::size_t basin_size = 0;
  std::size_t degree = 0;
};

/// Undirected simple graph over local optima. Nodes are sorted by id; edges
/// are (a, b) with a < b, sorted and unique.
struct LocalOptimaNetwork {
  std::string experiment_id;
  std::vector<LonNode> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  /// Position of node `id` in `nodes`. Throws if absent.
  std::size_t index_of(std::uint32_t id) const;
};

struct EdgeOptions {
  /// Leave optima with N_F = 0 (and their basins) out of the network.
  bool exclude_zero_nl_optima = false;
  unsigned workers = 1;
};

/// Connects two basins when a member of one has a neighbour (under `op`)
/// in the other. Work is O(members x |N|) hash probes, never all basin pairs.
LocalOptimaNetwork build_edges(const BasinSet& basins, MoveKind op, const EdgeOptions& options);

/// Node CSV: id,fitness_numerator,fitness_denominator,basin_size,degree
void write_nodes_csv(std::ostream& out, const LocalOptimaNetwork& lon);
/// Edge CSV: id_a,id_b with id_a < id_b
void write_edges_csv(std::ostream& out, const LocalOptimaNetwork& lon);
void write_graphml(std::ostream& out, const LocalOptimaNetwork& lon);

/// Reads the two CSVs back. `kind` decides how fitness fractions are split
/// into nonlinearity and worst-component count.
LocalOptimaNetwork read_lon_csv(std::istream& nodes, std::istream& edges, FitnessKind kind);

}  // namespace sboxlon
