#include "fpp/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "fpp/errors.hpp"
#include "fpp/summation.hpp"
#include "fpp/weights.hpp"

namespace fpp {

double Moments::standard_error() const {
  if (!variance || n == 0) return 0.0;
  return std::sqrt(*variance / static_cast<double>(n));
}

Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  KahanSum sum;
  for (double x : xs) sum += x;
  m.mean = sum.value() / static_cast<double>(m.n);
  if (m.n >= 2) {
    KahanSum sq;
    for (double x : xs) sq += (x - m.mean) * (x - m.mean);
    m.variance = sq.value() / static_cast<double>(m.n - 1);
  }
  return m;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::pair<double, double> bootstrap_ci(std::span<const double> xs, const Statistic& stat,
                                       std::size_t resamples, std::uint64_t seed, double level) {
  if (xs.empty() || resamples == 0) throw DomainError("bootstrap needs data and resamples");
  std::mt19937_64 rng(seed);
  std::vector<double> draw(xs.size());
  std::vector<double> stats(resamples);
  const double n = static_cast<double>(xs.size());
  for (auto& s : stats) {
    for (auto& v : draw) {
      auto j = static_cast<std::size_t>(uniform_from_bits(rng()) * n);
      v = xs[std::min(j, xs.size() - 1)];
    }
    s = stat(draw);
  }
  std::sort(stats.begin(), stats.end());
  const double alpha = (1.0 - level) / 2.0;
  auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1) + 0.5));
    return stats[std::min(idx, resamples - 1)];
  };
  return {at(alpha), at(1.0 - alpha)};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

unsigned default_threads() {
  if (const char* env = std::getenv("FPP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fpp
