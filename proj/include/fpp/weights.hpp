#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

/// Exponential distribution with rate a.
struct Exponential {
  double a = 1.0;
};

/// Uniform on [0, 1/a]; density a at 0.
struct UniformDensity {
  double a = 1.0;
};

/// A distribution given by its quantile function F*, piecewise linear through
/// (y, x) knots. Knots must start at y = 0, end at y = 1, and be nondecreasing
/// in both coordinates. A repeated y with increasing x encodes a flat stretch
/// of F (a jump of F*); a repeated x with increasing y encodes an atom of F.
class QuantileTable {
 public:
  explicit QuantileTable(std::vector<std::pair<double, double>> points);

  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

  /// Left-continuous inverse: inf{x : F(x) >= y}.
  double quantile(double y) const;
  /// Right-continuous CDF recovered by inverting the knots.
  double cdf(double x) const;
  /// Slope of F on its first non-degenerate segment.
  double density_at_zero() const;

 private:
  std::vector<std::pair<double, double>> points_;
};

using WeightFamily = std::variant<Exponential, UniformDensity, QuantileTable>;

struct WeightModel {
  WeightFamily family = Exponential{1.0};
  std::uint64_t root_seed = 0;
};

/// F*(y) for 0 <= y < 1; DomainError otherwise.
double quantile(const WeightFamily& family, double y);
inline double quantile(const WeightModel& model, double y) { return quantile(model.family, y); }

double cdf(const WeightFamily& family, double x);
/// F(x) / x, in closed form where one exists.
double cdf_ratio(const WeightFamily& family, double x);
/// The density a of F at 0.
double density_at_zero(const WeightFamily& family);
bool is_exponential(const WeightFamily& family) noexcept;
std::string family_name(const WeightFamily& family);

/// h(t) = F*(1 - exp(-rate t)) mapping Exponential(rate) weights onto `target`.
struct CouplingMap {
  WeightFamily target;
  double rate = 1.0;
};

double couple(const CouplingMap& map, double t);

// ---------------------------------------------------------------------------
// Deterministic weight oracle.
//
//   u(e) = ((mix64(edge_key(e) ^ rootSeed) >> 12) + 1/2) * 2^-52   in (0, 1)
//   tau_e = F*(u(e))
//
// The half-step offset keeps u away from both 0 and 1; with 52 bits the
// largest value 1 - 2^-53 is still representable below 1.
// ---------------------------------------------------------------------------

constexpr double uniform_from_bits(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline double edge_uniform(std::uint64_t root_seed, std::uint64_t edge_key) noexcept {
  return uniform_from_bits(mix64(edge_key ^ root_seed));
}

double edge_weight(const WeightModel& model, const EdgeId& e);
double edge_weight_by_key(const WeightModel& model, std::uint64_t edge_key);

/// Seed for replicate `index` of stream `stream` (typically the dimension).
/// Pure function of its arguments, so replicates never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) noexcept;

/// Any edge -> weight assignment; searches in the slab module take one of these.
using WeightField = std::function<double(const EdgeId&)>;

WeightField seeded_field(const WeightModel& model);
/// Weights h(tau_e) where tau_e ~ Exponential(rate) come from `exponential`.
WeightField coupled_field(const WeightModel& exponential, CouplingMap map);

// ---------------------------------------------------------------------------

/// Declared constants of the small-x condition |F(x)/x - a| <= C / |log x| on (0, eps0].
struct DensityCondition {
  double a = 1.0;
  double C = 1.0;
  double eps0 = 0.1;
};

struct DensityReport {
  double max_deviation = 0.0;  // max of |F(x)/x - a| * |log x| on the grid
  bool pass = false;
};

/// Log-spaced grid over [eps0 * 1e-12, eps0]. UnsupportedModel if F has an atom at 0.
DensityReport verify_density_condition(const WeightModel& model, const DensityCondition& cond,
                                       int grid_size);

}  // namespace fpp
