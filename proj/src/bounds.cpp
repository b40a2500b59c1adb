#include "fpp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fpp/errors.hpp"
#include "fpp/summation.hpp"

namespace fpp {

namespace {

// Terms this small relative to the running sum end the pass early; the
// remainder is then covered by the tail majorant at that point.
constexpr double kNegligible = 1e-30;

void require_dimension(int d) {
  if (d < 2) throw DomainError("dimension must be at least 2");
}

void require_rate(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("rate a must be positive and finite");
}

// Shared pieces of the series: A = 1 - 1/(2d), s_n, A^{n-1}.
struct SeriesTerms {
  explicit SeriesTerms(int d)
      : coeff(2.0 * (d - 1)),
        exponent(static_cast<double>(d - 2) / (d - 1)),
        log_a(std::log1p(-1.0 / (2.0 * d))),
        one_minus_a(1.0 / (2.0 * d)) {}

  double s(double n) const { return coeff * std::exp(exponent * std::log(n)); }
  double a_pow(double m) const { return std::exp(m * log_a); }

  double coeff;
  double exponent;
  double log_a;
  double one_minus_a;
};

}  // namespace

double perimeter_lower_bound(int d, double i) {
  require_dimension(d);
  if (!(i >= 1.0)) throw DomainError("cluster size must be at least 1");
  return SeriesTerms(d).s(i);
}

namespace {

std::pair<double, int> iso_minimum(int d, double i, double ell) {
  require_dimension(d);
  if (!(i >= 1.0) || !(ell >= 1.0)) throw DomainError("iso_min needs i >= 1 and ell >= 1");
  if (std::log(i) > (d - 1) * std::log(ell) - std::log(2.0) + 1e-12)
    throw DomainError("iso_min needs i <= ell^(d-1) / 2");
  double best = std::numeric_limits<double>::infinity();
  int arg = 1;
  for (int k = 1; k <= d - 1; ++k) {
    const double log_term = std::log(2.0 * k) + (1.0 - 1.0 / k) * std::log(i) +
                            (static_cast<double>(d - 1) / k - 1.0) * std::log(ell);
    if (log_term < best) {
      best = log_term;
      arg = k;
    }
  }
  return {std::exp(best), arg};
}

}  // namespace

double iso_min(int d, double i, double ell) { return iso_minimum(d, i, ell).first; }
int iso_argmin(int d, double i, double ell) { return iso_minimum(d, i, ell).second; }

std::size_t default_truncation(int d) {
  require_dimension(d);
  return static_cast<std::size_t>(std::ceil(40.0 * d));
}

SeriesBound first_moment_ub(int d, double a, std::size_t truncation) {
  require_dimension(d);
  require_rate(a);
  if (truncation < 2) throw DomainError("truncation must be at least 2");
  const SeriesTerms t(d);

  KahanSum sum;
  sum += 1.0 / (1.0 + t.s(1.0));
  std::size_t n = 2;
  for (; n <= truncation; ++n) {
    const double term = t.a_pow(static_cast<double>(n - 1)) / t.s(static_cast<double>(n));
    sum += term;
    if (term < kNegligible * sum.value()) break;
  }
  const std::size_t last = std::min(n, truncation);
  const double tail =
      t.a_pow(static_cast<double>(last)) / (t.s(static_cast<double>(last + 1)) * t.one_minus_a);

  SeriesBound out;
  out.tail = tail / a;
  out.value = (sum.value() + tail) / a;
  out.terms = last;
  return out;
}

SeriesBound second_moment_ub(int d, double a, std::size_t truncation) {
  require_dimension(d);
  require_rate(a);
  if (truncation < 2) throw DomainError("truncation must be at least 2");
  const SeriesTerms t(d);

  KahanSum sum;
  KahanSum prefix;  // P_n
  std::size_t n = 1;
  for (; n <= truncation; ++n) {
    const double nn = static_cast<double>(n);
    const double inv = 1.0 / (nn + t.s(nn));
    prefix += inv;
    const double term = 2.0 * t.a_pow(nn - 1.0) * inv * prefix.value();
    sum += term;
    if (n >= 2 && term < kNegligible * sum.value()) break;
  }
  const std::size_t last = std::min(n, truncation);
  const double a_last = t.a_pow(static_cast<double>(last));
  const double s_next = t.s(static_cast<double>(last + 1));
  const double tail = 2.0 * (prefix.value() * a_last / (s_next * t.one_minus_a) +
                             a_last / (s_next * s_next * t.one_minus_a * t.one_minus_a));

  SeriesBound out;
  out.tail = tail / (a * a);
  out.value = (sum.value() + tail) / (a * a);
  out.terms = last;
  return out;
}

double asymptote(double d, double a) {
  if (!(d >= 2.0)) throw DomainError("dimension must be at least 2");
  require_rate(a);
  return std::log(d) / (2.0 * a * d);
}

BoundReport bound_report(int d, double a, std::size_t truncation) {
  const auto m1 = first_moment_ub(d, a, truncation);
  const auto m2 = second_moment_ub(d, a, truncation);
  BoundReport r;
  r.d = d;
  r.a = a;
  r.truncation = truncation;
  r.ub1 = m1.value;
  r.ub1_tail = m1.tail;
  r.ub2 = m2.value;
  r.ub2_tail = m2.tail;
  const double scale = 2.0 * a * d / std::log(static_cast<double>(d));
  r.ratio1 = scale * r.ub1;
  r.ratio2 = scale * scale * r.ub2;
  r.asymptote = asymptote(d, a);
  return r;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

constexpr unsigned kMaxDepth = 20;
// exp(-80) relative: where integrals over [z, inf) are cut.
constexpr double kDecayLengths = 80.0;

template <class F>
double integrate(F&& f, double lo, double hi, double tol, const char* what) {
  if (!(hi > lo)) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, lo, hi, kMaxDepth, tol, &error, &l1);
  if (!std::isfinite(value) || error > tol * std::max(std::abs(value), l1) + 1e-300)
    throw QuadratureFailure(std::string(what) + ": error estimate " + std::to_string(error) +
                            " exceeds tolerance");
  return value;
}

}  // namespace

IntegralParts integral_decomposition(int d) {
  if (d < 3) throw DomainError("integral decomposition needs d >= 3");
  const SeriesTerms t(d);
  const double two_d = 2.0 * d;
  const double cut = kDecayLengths * two_d;
  const double inner_tol = kQuadratureTolerance * 1e-2;

  auto g = [&](double y) { return t.a_pow(y - 1.0) / t.s(y); };
  auto inner = [&](double lo, double hi) { return integrate(g, lo, hi, inner_tol, "inner integral"); };
  auto inv_s = [&](double x) { return 1.0 / t.s(x); };

  IntegralParts out;
  out.I = 2.0 * integrate([&](double x) { return inv_s(x) * inner(x - 1.0, two_d); }, 2.0,
                          two_d + 1.0, kQuadratureTolerance, "(I)");

  const double g_tail = inner(two_d, two_d + cut);
  out.II = 2.0 * integrate(inv_s, 2.0, two_d + 1.0, kQuadratureTolerance, "(II)") * g_tail;

  out.III = 2.0 * integrate([&](double x) { return inv_s(x) * inner(x - 1.0, x - 1.0 + cut); },
                            two_d + 1.0, two_d + 1.0 + cut, kQuadratureTolerance, "(III)");
  return out;
}

double first_moment_integral_bound(int d) {
  require_dimension(d);
  const SeriesTerms t(d);
  const double cut = kDecayLengths * 2.0 * d;
  const double integral = integrate(
      [&](double x) { return t.a_pow(x - 1.0) * std::exp(-t.exponent * std::log(x)); }, 1.0,
      1.0 + cut, kQuadratureTolerance, "first-moment integral");
  return 1.0 / (2.0 * d - 1.0) + integral / (2.0 * (d - 1));
}

}  // namespace fpp
