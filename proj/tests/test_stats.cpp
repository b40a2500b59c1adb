#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>

#include "fpp/errors.hpp"
#include "fpp/stats.hpp"
#include "fpp/summation.hpp"

using namespace fpp;

TEST_CASE("compensated summation recovers cancelled digits") {
  KahanSum s;
  s += 1e16;
  for (int k = 0; k < 1000; ++k) s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1000.0);
}

TEST_CASE("moments") {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = moments(xs);
  CHECK(m.n == 4);
  CHECK(m.mean == 2.5);
  REQUIRE(m.variance);
  CHECK(*m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.standard_error() == doctest::Approx(std::sqrt(5.0 / 12.0)));
  const std::vector<double> one{7.0};
  CHECK_FALSE(moments(one).variance.has_value());
  CHECK(moments(one).standard_error() == 0.0);
}

TEST_CASE("Wilson interval") {
  // Reference values computed by hand from the score formula.
  const auto [lo, hi] = wilson_interval(10, 100);
  CHECK(lo == doctest::Approx(0.0552291).epsilon(1e-5));
  CHECK(hi == doctest::Approx(0.1743657).epsilon(1e-5));
  const auto [zlo, zhi] = wilson_interval(0, 50);
  CHECK(zlo == doctest::Approx(0.0));
  CHECK(zhi > 0.0);
  const auto [flo, fhi] = wilson_interval(50, 50);
  CHECK(fhi == 1.0);
  CHECK(flo < 1.0);
}

TEST_CASE("bootstrap interval covers the sample mean and is reproducible") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(3.0, 1.0);
  std::vector<double> xs(2000);
  for (auto& x : xs) x = g(rng);
  const Statistic mean = [](std::span<const double> v) { return moments(v).mean; };
  const auto a = bootstrap_ci(xs, mean, 1000, 17);
  const auto b = bootstrap_ci(xs, mean, 1000, 17);
  CHECK(a == b);
  const double m = moments(xs).mean;
  CHECK(a.first < m);
  CHECK(a.second > m);
  // Width close to 2 * 1.96 / sqrt(n).
  CHECK(a.second - a.first == doctest::Approx(2 * kZ95 / std::sqrt(2000.0)).epsilon(0.15));
  CHECK_THROWS_AS(bootstrap_ci({}, mean, 10, 0), DomainError);
}

TEST_CASE("two-sample KS statistic") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_statistic({1, 3}, {2, 4}) == doctest::Approx(0.5));

  // Brute-force oracle: evaluate both ECDFs at every pooled point.
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(0, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(30), b(45);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    double brute = 0.0;
    for (double t = -1; t <= 21; t += 1.0) {
      const double fa = std::count_if(a.begin(), a.end(), [&](double x) { return x <= t; }) / 30.0;
      const double fb = std::count_if(b.begin(), b.end(), [&](double x) { return x <= t; }) / 45.0;
      brute = std::max(brute, std::abs(fa - fb));
    }
    CHECK(ks_statistic(a, b) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 37) throw DomainError("boom");
                               }),
                  DomainError);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("worker count honours FPP_THREADS") {
  ::setenv("FPP_THREADS", "3", 1);
  CHECK(default_threads() == 3);
  ::setenv("FPP_THREADS", "junk", 1);
  CHECK(default_threads() >= 1);
  ::unsetenv("FPP_THREADS");
}
