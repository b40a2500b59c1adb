#include <doctest.h>

#include <cmath>

#include "fpp/bounds.hpp"
#include "fpp/errors.hpp"
#include "oracles.hpp"

using namespace fpp;

TEST_CASE("perimeter lower bound") {
  for (int d : {2, 3, 10, 1000}) CHECK(perimeter_lower_bound(d, 1.0) == doctest::Approx(2.0 * (d - 1)));
  CHECK(perimeter_lower_bound(3, 4.0) == doctest::Approx(8.0));
  for (double i : {1.0, 7.0, 1e6}) CHECK(perimeter_lower_bound(2, i) == 2.0);
  CHECK_THROWS_AS(perimeter_lower_bound(3, 0.5), DomainError);
  CHECK_THROWS_AS(perimeter_lower_bound(1, 2.0), DomainError);
}

TEST_CASE("iso_min") {
  SUBCASE("ell = i picks the last term") {
    for (int d : {3, 4, 6})
      for (double i : {4.0, 10.0, 50.0}) {
        // At d = 3, i = 4 the k = 1 and k = 2 terms tie at 8; the smaller k is reported.
        if (!(d == 3 && i == 4.0)) CHECK(iso_argmin(d, i, i) == d - 1);
        CHECK(iso_min(d, i, i) == doctest::Approx(perimeter_lower_bound(d, i)).epsilon(1e-12));
      }
  }
  SUBCASE("d = 2 has a single term") {
    CHECK(iso_min(2, 3.0, 10.0) == doctest::Approx(2.0));
    CHECK(iso_argmin(2, 3.0, 10.0) == 1);
  }
  SUBCASE("monotone in i on a brute-force scan") {
    for (int d = 2; d <= 6; ++d)
      for (int ell = 1; ell <= 8; ++ell) {
        const double cap = std::pow(double(ell), d - 1) / 2.0;
        for (int i = 1; i + 1 <= cap; ++i) CHECK(iso_min(d, i + 1, ell) >= iso_min(d, i, ell) * (1 - 1e-12));
      }
  }
  CHECK_THROWS_AS(iso_min(3, 10.0, 2.0), DomainError);
}

TEST_CASE("first moment at d=2 sums to 11/6") {
  const auto b = first_moment_ub(2, 1.0, 200);
  CHECK(b.tail >= 0.0);
  CHECK(b.tail < 1e-10);
  CHECK(b.value >= 11.0 / 6.0 - 1e-15);
  CHECK(b.value - b.tail <= 11.0 / 6.0 + 1e-15);
}

TEST_CASE("series agree with direct partial sums") {
  for (int d : {3, 10, 100}) {
    const std::size_t n = default_truncation(d);
    const auto b = first_moment_ub(d, 1.0, n);
    const double partial = oracle::first_moment_partial(d, static_cast<long>(b.terms));
    CHECK(b.value - b.tail == doctest::Approx(partial).epsilon(1e-13));
    CHECK(oracle::first_moment_partial(d, 50 * d) <= b.value * (1 + 1e-14));
  }
}

TEST_CASE("bounds scale exactly with the rate") {
  for (int d : {3, 50, 1000}) {
    const std::size_t n = default_truncation(d);
    CHECK(first_moment_ub(d, 2.0, n).value == first_moment_ub(d, 1.0, n).value / 2.0);
    CHECK(second_moment_ub(d, 2.0, n).value == second_moment_ub(d, 1.0, n).value / 4.0);
  }
}

TEST_CASE("bounds are positive, finite, and monotone in the truncation") {
  for (int d : {2, 5, 100}) {
    double prev1 = INFINITY, prev2 = INFINITY;
    for (std::size_t n : {2u, 5u, 20u, 100u, 1000u}) {
      const auto b1 = first_moment_ub(d, 1.0, n);
      const auto b2 = second_moment_ub(d, 1.0, n);
      CHECK(std::isfinite(b1.value));
      CHECK(std::isfinite(b2.value));
      CHECK(b1.tail >= 0.0);
      CHECK(b2.tail >= 0.0);
      CHECK(b1.value <= prev1 * (1 + 1e-14));
      CHECK(b2.value <= prev2 * (1 + 1e-14));
      prev1 = b1.value;
      prev2 = b2.value;
    }
  }
  CHECK_THROWS_AS(first_moment_ub(3, 1.0, 1), DomainError);
  CHECK_THROWS_AS(second_moment_ub(3, 0.0, 10), DomainError);
}

TEST_CASE("normalized ratios at d = 10^4") {
  const auto r = bound_report(10000, 1.0, default_truncation(10000));
  CHECK(r.ratio1 > 1.0);
  CHECK(r.ratio1 < 2.0);
  CHECK(r.ratio2 > 1.0);
  CHECK(r.ratio2 < 4.0);
}

TEST_CASE("asymptote") {
  CHECK(asymptote(std::exp(2.0), 0.5) == doctest::Approx(2.0 / std::exp(2.0)));
  CHECK(asymptote(10.0, 1.0) == doctest::Approx(std::log(10.0) / 20.0));
  CHECK(asymptote(10.0, 2.0) == doctest::Approx(asymptote(10.0, 1.0) / 2.0));
}

TEST_CASE("integral pieces match the Fubini reduction") {
  for (int d : {3, 10, 100, 1000}) {
    const auto p = integral_decomposition(d);
    CHECK(p.I == doctest::Approx(oracle::part_I(d)).epsilon(1e-6));
    CHECK(p.II == doctest::Approx(oracle::part_II(d)).epsilon(1e-6));
    CHECK(p.III == doctest::Approx(oracle::part_III(d)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(integral_decomposition(2), DomainError);
}

TEST_CASE("the leading piece stays under the squared asymptote and closes in on it") {
  // Ratios from the Fubini oracle: 0.839, 0.863, 0.884, 0.900 at d = 10^3 .. 10^6.
  double prev = 0.0;
  for (int d : {1000, 10000, 100000, 1000000}) {
    const double scaled = integral_decomposition(d).I / std::pow(std::log(double(d)) / (2.0 * d), 2);
    CHECK(scaled < 1.0);
    CHECK(scaled > prev);
    prev = scaled;
  }
}

TEST_CASE("the integral majorant dominates the series") {
  for (int d : {3, 10, 100}) {
    const auto b = first_moment_ub(d, 1.0, default_truncation(d));
    CHECK(first_moment_integral_bound(d) >= b.value - b.tail);
  }
}
