#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sboxlon {

enum class TailModel { power_law, exponential };
std::string_view to_string(TailModel model);

/// Discrete tail fit on k >= x_min:
///   power_law:   P(k) = k^-alpha / zeta(alpha, x_min)
///   exponential: P(k) = (1 - e^-rate) e^(-rate (k - x_min))
struct TailFit {
  TailModel model = TailModel::power_law;
  double parameter = 0.0;  // alpha or rate
  std::int64_t x_min = 0;
  double ks_statistic = 0.0;
  /// Fraction of bootstrap replicates whose KS distance is at least the
  /// observed one: p_count / bootstrap_count.
  double p_value = 0.0;
  std::size_t p_count = 0;
  std::size_t bootstrap_count = 0;
  std::uint64_t seed = 0;
  std::size_t observations = 0;
  std::size_t tail_size = 0;
};

/// Smallest tail a candidate x_min may leave.
inline constexpr std::size_t kMinTailSize = 10;
inline constexpr std::size_t kMinObservations = 50;
inline constexpr std::size_t kMinBootstrap = 100;
inline constexpr double kSignificance = 0.1;

/// Point estimate with x_min chosen to minimise the KS distance. `sorted`
/// must be ascending. No bootstrap; p fields stay zero.
TailFit fit_tail_point(std::span<const std::int64_t> sorted, TailModel model);

/// Maximum-likelihood fit at a fixed x_min (parameter and KS distance).
TailFit fit_at_xmin(std::span<const std::int64_t> sorted, TailModel model, std::int64_t x_min);

/// Full fit: point estimate plus semi-parametric bootstrap p-value. Each
/// replicate keeps the empirical body below x_min, draws the tail from the
/// fitted model, and is refitted including its own x_min search. Replicate r
/// uses derive_seed(seed, r), so the result does not depend on `workers`.
/// Throws std::invalid_argument on fewer than 50 observations, fewer than
/// 100 replicates, negative values or a constant sample.
TailFit fit_tail(std::span<const std::int64_t> data, TailModel model, std::size_t bootstrap_count,
                 std::uint64_t seed, unsigned workers = 1);

/// Draws `count` values from a fitted tail model (k >= x_min).
std::vector<std::int64_t> sample_tail(const TailFit& fit, std::size_t count, std::uint64_t seed);

enum class Verdict { plausible, rejected };
std::string_view to_string(Verdict verdict);

inline Verdict verdict_for(double p_value) {
  return p_value > kSignificance ? Verdict::plausible : Verdict::rejected;
}

struct FitReport {
  Verdict power_law;
  Verdict exponential;
};

/// Verdicts at significance 0.1 for a (power-law, exponential) pair.
FitReport classify(const TailFit& power_law, const TailFit& exponential);
FitReport classify(double power_law_p, double exponential_p);

}  // namespace sboxlon
