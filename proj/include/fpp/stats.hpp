#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fpp {

inline constexpr double kZ95 = 1.959963984540054;

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> variance;  // unbiased; absent when n < 2
  double standard_error() const;
};

/// Two-pass mean and variance with compensated sums, in index order.
Moments moments(std::span<const double> xs);

/// Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = kZ95);

using Statistic = std::function<double(std::span<const double>)>;

/// Percentile bootstrap interval of `stat` over `resamples` resamples drawn with
/// a std::mt19937_64 seeded by `seed`.
std::pair<double, double> bootstrap_ci(std::span<const double> xs, const Statistic& stat,
                                       std::size_t resamples, std::uint64_t seed,
                                       double level = 0.95);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Worker count: FPP_THREADS if set and positive, else hardware concurrency.
unsigned default_threads();

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written by index; the first exception thrown is rethrown after joining.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fpp
