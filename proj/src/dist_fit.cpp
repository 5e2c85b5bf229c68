#include "sboxlon/dist_fit.hpp"

#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sboxlon/rng.hpp"

namespace sboxlon {

std::string_view to_string(TailModel model) {
  return model == TailModel::power_law ? "power_law" : "exponential";
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::plausible ? "plausible" : "rejected";
}

namespace {

constexpr double kAlphaLow = 1.0 + 1e-4;
constexpr double kAlphaHigh = 30.0;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

double hurwitz_zeta(double s, double q) {
  gsl_sf_result result;
  if (gsl_sf_hzeta_e(s, q, &result) != 0) return kInfinity;
  return result.val;
}

/// Tail CDF F(k) = P(X <= k | X >= x_min) of the fitted model.
class TailCdf {
 public:
  TailCdf(TailModel model, double parameter, std::int64_t x_min)
      : model_(model), parameter_(parameter), x_min_(x_min) {
    if (model_ == TailModel::power_law) norm_ = hurwitz_zeta(parameter_, static_cast<double>(x_min_));
  }

  double operator()(std::int64_t k) const {
    if (k < x_min_) return 0.0;
    if (model_ == TailModel::exponential) {
      return -std::expm1(-parameter_ * static_cast<double>(k - x_min_ + 1));
    }
    return 1.0 - hurwitz_zeta(parameter_, static_cast<double>(k + 1)) / norm_;
  }

 private:
  TailModel model_;
  double parameter_;
  std::int64_t x_min_;
  double norm_ = 1.0;
};

double ks_distance(std::span<const std::int64_t> tail, const TailCdf& cdf) {
  const double n = static_cast<double>(tail.size());
  double distance = 0.0;
  std::size_t k = 0;
  while (k < tail.size()) {
    const std::int64_t x = tail[k];
    std::size_t end = k;
    while (end < tail.size() && tail[end] == x) ++end;
    const double before = static_cast<double>(k) / n;
    const double after = static_cast<double>(end) / n;
    distance = std::max(distance, std::abs(before - cdf(x - 1)));
    distance = std::max(distance, std::abs(after - cdf(x)));
    k = end;
  }
  return distance;
}

/// Inverse-CDF sampler for a fitted tail.
class TailSampler {
 public:
  explicit TailSampler(const TailFit& fit) : fit_(fit) {
    if (fit.model != TailModel::power_law) return;
    const double alpha = fit.parameter;
    const double norm = hurwitz_zeta(alpha, static_cast<double>(fit.x_min));
    double cumulative = 0.0;
    for (std::int64_t k = fit.x_min; cumulative < 1.0 - 1e-9 && cumulative_.size() < 2'000'000; ++k) {
      cumulative += std::pow(static_cast<double>(k), -alpha) / norm;
      cumulative_.push_back(cumulative);
    }
  }

  std::int64_t operator()(Rng& rng) const {
    const double u = rng.uniform01();
    if (fit_.model == TailModel::exponential) {
      return fit_.x_min + static_cast<std::int64_t>(std::floor(-std::log1p(-u) / fit_.parameter));
    }
    if (u < cumulative_.back()) {
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      return fit_.x_min + static_cast<std::int64_t>(it - cumulative_.begin());
    }
    // Beyond the table: continuous approximation of the remaining tail.
    const double start = static_cast<double>(fit_.x_min) + static_cast<double>(cumulative_.size());
    const double r = rng.uniform01();
    const double x = std::floor((start - 0.5) * std::pow(1.0 - r, -1.0 / (fit_.parameter - 1.0)) + 0.5);
    return static_cast<std::int64_t>(std::min(x, 4.0e18));
  }

 private:
  TailFit fit_;
  std::vector<double> cumulative_;
};

}  // namespace

TailFit fit_at_xmin(std::span<const std::int64_t> sorted, TailModel model, std::int64_t x_min) {
  auto first = std::lower_bound(sorted.begin(), sorted.end(), x_min);
  std::span<const std::int64_t> tail(first, sorted.end());
  TailFit fit;
  fit.model = model;
  fit.x_min = x_min;
  fit.observations = sorted.size();
  fit.tail_size = tail.size();
  fit.ks_statistic = kInfinity;
  if (tail.empty()) return fit;
  const double n = static_cast<double>(tail.size());

  if (model == TailModel::exponential) {
    double excess = 0.0;
    for (auto x : tail) excess += static_cast<double>(x - x_min);
    const double mean = excess / n;
    if (mean <= 0.0) return fit;
    fit.parameter = std::log1p(1.0 / mean);
  } else {
    if (x_min < 1) return fit;
    double sum_log = 0.0;
    for (auto x : tail) sum_log += std::log(static_cast<double>(x));
    const double q = static_cast<double>(x_min);
    auto nll = [&](double alpha) { return alpha * sum_log + n * std::log(hurwitz_zeta(alpha, q)); };
    fit.parameter = boost::math::tools::brent_find_minima(nll, kAlphaLow, kAlphaHigh, 40).first;
  }
  fit.ks_statistic = ks_distance(tail, TailCdf(model, fit.parameter, x_min));
  return fit;
}

TailFit fit_tail_point(std::span<const std::int64_t> sorted, TailModel model) {
  TailFit best;
  best.model = model;
  best.ks_statistic = kInfinity;
  best.observations = sorted.size();
  for (std::size_t k = 0; k < sorted.size();) {
    const std::int64_t candidate = sorted[k];
    const std::size_t tail = sorted.size() - k;
    if (tail < kMinTailSize || candidate == sorted.back()) break;
    if (model == TailModel::exponential || candidate >= 1) {
      TailFit fit = fit_at_xmin(sorted, model, candidate);
      if (fit.ks_statistic < best.ks_statistic) best = fit;
    }
    while (k < sorted.size() && sorted[k] == candidate) ++k;
  }
  if (best.ks_statistic == kInfinity) {
    throw std::invalid_argument("fit_tail: degenerate input, no usable tail");
  }
  return best;
}

std::vector<std::int64_t> sample_tail(const TailFit& fit, std::size_t count, std::uint64_t seed) {
  TailSampler sampler(fit);
  Rng rng(seed);
  std::vector<std::int64_t> out(count);
  for (auto& x : out) x = sampler(rng);
  return out;
}

TailFit fit_tail(std::span<const std::int64_t> data, TailModel model, std::size_t bootstrap_count,
                 std::uint64_t seed, unsigned workers) {
  if (data.size() < kMinObservations) {
    throw std::invalid_argument("fit_tail: at least 50 observations required");
  }
  if (bootstrap_count < kMinBootstrap) {
    throw std::invalid_argument("fit_tail: bootstrap_count must be at least 100");
  }
  std::vector<std::int64_t> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0) throw std::invalid_argument("fit_tail: negative observation");
  if (sorted.front() == sorted.back()) throw std::invalid_argument("fit_tail: degenerate input, constant sample");

  TailFit fit = fit_tail_point(sorted, model);
  fit.bootstrap_count = bootstrap_count;
  fit.seed = seed;

  const std::span<const std::int64_t> body(sorted.data(), sorted.size() - fit.tail_size);
  const double tail_fraction = static_cast<double>(fit.tail_size) / static_cast<double>(sorted.size());
  const TailSampler sampler(fit);

  std::vector<double> distances(bootstrap_count, kInfinity);
  auto replicate = [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    std::vector<std::int64_t> sample(sorted.size());
    for (auto& x : sample) {
      if (body.empty() || rng.uniform01() < tail_fraction) {
        x = sampler(rng);
      } else {
        x = body[rng.uniform_below(body.size())];
      }
    }
    std::sort(sample.begin(), sample.end());
    try {
      distances[r] = fit_tail_point(sample, model).ks_statistic;
    } catch (const std::invalid_argument&) {
      distances[r] = kInfinity;  // unfittable replicate counts as at least as extreme
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t r = 0; r < bootstrap_count; ++r) replicate(r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < bootstrap_count; r += workers) replicate(r);
      });
    }
  }
  fit.p_count = static_cast<std::size_t>(
      std::count_if(distances.begin(), distances.end(),
                    [&](double d) { return d >= fit.ks_statistic; }));
  fit.p_value = static_cast<double>(fit.p_count) / static_cast<double>(bootstrap_count);
  return fit;
}

FitReport classify(double power_law_p, double exponential_p) {
  return FitReport{verdict_for(power_law_p), verdict_for(exponential_p)};
}

FitReport classify(const TailFit& power_law, const TailFit& exponential) {
  if (power_law.model != TailModel::power_law || exponential.model != TailModel::exponential) {
    throw std::invalid_argument("classify: expected a (power_law, exponential) pair");
  }
  if (power_law.observations != exponential.observations) {
    throw std::invalid_argument("classify: fits were made on different data");
  }
  return classify(power_law.p_value, exponential.p_value);
}

}  // namespace sboxlon
