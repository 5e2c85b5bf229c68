#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "sboxlon/fitness.hpp"
#include "sboxlon/lon.hpp"

namespace sboxlon {

/// Byte lengths of the two append-only logs at a consistent checkpoint.
struct StoreOffsets {
  std::uint64_t optima_bytes = 0;
  std::uint64_t member_bytes = 0;
};

/// On-disk basin store under <dir>/basins/:
///
///   optima.log   one line per basin in creation order:
///                id <TAB> nonlinearity <TAB> worst_components <TAB> optimum (text encoding)
///   members.bin  one record per archived solution in insertion order:
///                basin id (uint32, little endian) followed by the 2^n-byte key
///   basins.csv   summary written on completion:
///                id,fitness_numerator,fitness_denominator,nonlinearity,size,optimum
///
/// Logs only ever grow; a checkpoint records their lengths so an interrupted
/// run can cut them back to a consistent state.
class BasinStoreWriter {
 public:
  /// Opens (creating if needed) the logs, first truncating them to `offsets`.
  BasinStoreWriter(const std::filesystem::path& dir, const StoreOffsets& offsets,
                   std::size_t basins_written, std::size_t members_written);

  /// Appends everything in `set` added since the previous call and flushes.
  StoreOffsets sync(const BasinSet& set);

 private:
  std::ofstream optima_;
  std::ofstream members_;
  std::size_t basins_written_;
  std::size_t members_written_;
  StoreOffsets offsets_;
};

/// Rebuilds a BasinSet from the logs, reading at most `offsets` bytes of each.
BasinSet load_basin_store(const std::filesystem::path& dir, int n, FitnessKind fitness,
                          const std::string& experiment_id, const StoreOffsets& offsets);

void write_basin_summary(const std::filesystem::path& dir, const BasinSet& set);

}  // namespace sboxlon
