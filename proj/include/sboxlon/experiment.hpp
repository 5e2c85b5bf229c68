#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sboxlon/fitness.hpp"
#include "sboxlon/metrics.hpp"
#include "sboxlon/neighbourhood.hpp"

namespace sboxlon {

/// Error with a short machine-readable code, e.g. "config", "manifest_mismatch".
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

enum class SampleMode { exhaustive, samples };

/// Everything needed to replay one experiment bit for bit. The text form is
/// a flat "key = value" document; every key is mandatory.
struct ExperimentConfig {
  int n = 3;
  FitnessKind fitness = FitnessKind::nl;
  MoveKind op = MoveKind::swap;
  SampleMode mode = SampleMode::exhaustive;
  std::size_t samples = 40320;
  std::uint64_t seed = 1;
  PathKind path_mode = PathKind::exact;
  std::size_t path_sources = 0;
  std::size_t bootstrap_count = 1000;
  unsigned workers = 1;
  std::string output_directory;
  bool exclude_zero_nl_optima = true;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates the text form. Throws ExperimentError("config").
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);
/// Canonical text form, keys in a fixed order.
std::string to_text(const ExperimentConfig& config);
/// Throws ExperimentError("config") on an invalid combination.
void validate(const ExperimentConfig& config);

/// SHA-256 (hex) of the canonical text minus `workers` and
/// `output_directory`, which do not affect results.
std::string config_checksum(const ExperimentConfig& config);

/// Number of starts the config asks for: (2^n)! in exhaustive mode.
std::size_t requested_samples(const ExperimentConfig& config);

/// Start of sample k: the seeded random permutation advanced k times along
/// the lexicographic cycle.
SBox start_for_sample(const ExperimentConfig& config, std::size_t k);

struct RunOptions {
  /// Overrides config.workers.
  std::optional<unsigned> threads;
  /// Wall-clock budget for the sampling phase; sampling stops at the next
  /// batch boundary once it is spent and analysis runs on what was sampled.
  std::optional<double> time_budget_seconds;
  /// Stop (as if interrupted) once this many samples are complete.
  std::optional<std::size_t> stop_after;
  /// Write a checkpoint at least every this many samples.
  std::size_t checkpoint_every = 2000;
};

struct RunResult {
  std::filesystem::path directory;
  std::size_t completed_samples = 0;
  /// "complete", "budget_exhausted" or "interrupted".
  std::string status;
};

/// Output directory after applying $SBOXLON_OUTPUT_ROOT to relative paths.
std::filesystem::path resolve_output_directory(const std::filesystem::path& configured);

/// Runs (or, if the directory holds a manifest for the same config,
/// continues) an experiment and writes every artifact.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});
RunResult run_in(const ExperimentConfig& config, const std::filesystem::path& dir,
                 const RunOptions& options = {});

/// Continues an interrupted experiment from its last checkpoint. A completed
/// experiment is left untouched. Throws ExperimentError("checksum") when the
/// stored config no longer matches the manifest.
RunResult resume(const std::filesystem::path& dir, const RunOptions& options = {});

/// Rebuilds nodes.csv, edges.csv and lon.graphml from the basin store.
void export_network(const std::filesystem::path& dir, std::optional<unsigned> threads = {});
/// Recomputes metrics.json, degree_distribution.csv and the correlation
/// CSVs from the stored network.
void recompute_metrics(const std::filesystem::path& dir, std::optional<unsigned> threads = {});
/// Refits the degree distribution and rewrites fit_report.json.
void refit(const std::filesystem::path& dir, std::optional<unsigned> threads = {});

}  // namespace sboxlon
