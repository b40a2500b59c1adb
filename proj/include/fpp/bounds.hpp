#pragma once

#include <cstddef>

namespace fpp {

/// s_i = 2 (d - 1) i^{(d-2)/(d-1)}, the lower bound on the in-plane perimeter
/// of any i-vertex cluster in H_0. Accepts real i >= 1 (the quadratures use s_x).
double perimeter_lower_bound(int d, double i);

/// min over 1 <= k <= d - 1 of 2k i^{1 - 1/k} ell^{(d-1)/k - 1}, for sets of
/// i <= ell^{d-1} / 2 vertices in a box of side ell.
double iso_min(int d, double i, double ell);
/// The k attaining iso_min (smallest such k on ties).
int iso_argmin(int d, double i, double ell);

struct SeriesBound {
  double value = 0.0;  // includes the tail
  double tail = 0.0;   // rigorous majorant of the truncated remainder
  std::size_t terms = 0;  // terms summed before truncation or early exit
};

/// ceil(40 d): A^n has decayed by e^-20 there.
std::size_t default_truncation(int d);

/// Upper bound on E s01 under Exponential(a):
///   (1/a) [ 1/(1 + s_1) + sum_{n=2}^N A^{n-1} / s_n + A^N / (s_{N+1} (1 - A)) ],  A = 1 - 1/(2d).
SeriesBound first_moment_ub(int d, double a, std::size_t truncation);

/// Upper bound on E s01^2 under Exponential(a):
///   (1/a^2) [ 2 sum_{n=1}^N A^{n-1} P_n / (n + s_n) + tail ],  P_n = sum_{k<=n} 1/(k + s_k),
/// with tail = 2 [ P_N A^N / (s_{N+1}(1-A)) + A^N / (s_{N+1}^2 (1-A)^2) ].
SeriesBound second_moment_ub(int d, double a, std::size_t truncation);

/// log d / (2 a d).
double asymptote(double d, double a);

struct BoundReport {
  int d = 0;
  double a = 0.0;
  std::size_t truncation = 0;
  double ub1 = 0.0;
  double ub1_tail = 0.0;
  double ub2 = 0.0;
  double ub2_tail = 0.0;
  double ratio1 = 0.0;  // (2ad / log d) ub1
  double ratio2 = 0.0;  // (2ad / log d)^2 ub2
  double asymptote = 0.0;
};

BoundReport bound_report(int d, double a, std::size_t truncation);

struct IntegralParts {
  double I = 0.0;
  double II = 0.0;
  double III = 0.0;
};

/// The three pieces of 2 int_2^inf (1/s_x) int_{x-1}^inf A^{y-1}/s_y dy dx, split at
/// x = 2d + 1 (outer) and y = 2d (inner), by nested adaptive Gauss-Kronrod
/// quadrature at relative tolerance 1e-8. Requires d >= 3; QuadratureFailure if
/// the error estimate misses the tolerance.
IntegralParts integral_decomposition(int d);

/// 1/(2d - 1) + 1/(2(d - 1)) int_1^inf A^{x-1} x^{-(d-2)/(d-1)} dx, the integral
/// majorant of the first-moment series at rate 1.
double first_moment_integral_bound(int d);

inline constexpr double kQuadratureTolerance = 1e-8;

}  // namespace fpp
