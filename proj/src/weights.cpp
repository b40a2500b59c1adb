#include "fpp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_rate(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("rate a must be positive and finite");
}

}  // namespace

QuantileTable::QuantileTable(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw DomainError("quantile table needs at least two knots");
  if (points_.front().first != 0.0 || points_.back().first != 1.0)
    throw DomainError("quantile table must span y = 0 to y = 1");
  if (!(points_.front().second >= 0.0)) throw DomainError("quantile table weights must be nonnegative");
  for (std::size_t j = 0; j < points_.size(); ++j) {
    const auto [y, x] = points_[j];
    if (!std::isfinite(y) || !std::isfinite(x)) throw DomainError("quantile table knots must be finite");
    if (j == 0) continue;
    const auto [py, px] = points_[j - 1];
    if (y < py || x < px) throw DomainError("quantile table knots must be nondecreasing");
    if (y == py && x == px) throw DomainError("quantile table has a repeated knot");
  }
}

double QuantileTable::quantile(double y) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), y,
                             [](const auto& knot, double v) { return knot.first < v; });
  if (it->first == y) return it->second;  // first of equal-y knots: the infimum
  const auto& [y1, x1] = *it;
  const auto& [y0, x0] = *(it - 1);
  return x0 + (x1 - x0) * ((y - y0) / (y1 - y0));
}

double QuantileTable::cdf(double x) const {
  if (x < points_.front().second) return 0.0;
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const auto& knot) { return v < knot.second; });
  if (it == points_.end()) return 1.0;
  const auto& [y1, x1] = *it;
  const auto& [y0, x0] = *(it - 1);
  return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

double QuantileTable::density_at_zero() const {
  if (points_.front().second > 0.0) return 0.0;
  std::size_t j = 0;
  while (j + 1 < points_.size() && points_[j + 1].second == 0.0) ++j;
  if (points_[j].first > 0.0) return std::numeric_limits<double>::infinity();
  return (points_[j + 1].first - points_[j].first) / (points_[j + 1].second - points_[j].second);
}

double quantile(const WeightFamily& family, double y) {
  if (!(y >= 0.0 && y < 1.0)) throw DomainError("quantile argument must lie in [0, 1)");
  return std::visit(overloaded{
                        [&](const Exponential& f) { return -std::log1p(-y) / f.a; },
                        [&](const UniformDensity& f) { return y / f.a; },
                        [&](const QuantileTable& f) { return f.quantile(y); },
                    },
                    family);
}

double cdf(const WeightFamily& family, double x) {
  return std::visit(overloaded{
                        [&](const Exponential& f) { return x <= 0.0 ? 0.0 : -std::expm1(-f.a * x); },
                        [&](const UniformDensity& f) { return std::clamp(f.a * x, 0.0, 1.0); },
                        [&](const QuantileTable& f) { return f.cdf(x); },
                    },
                    family);
}

double cdf_ratio(const WeightFamily& family, double x) {
  if (!(x > 0.0)) throw DomainError("cdf_ratio needs x > 0");
  return std::visit(overloaded{
                        [&](const Exponential& f) { return -std::expm1(-f.a * x) / x; },
                        [&](const UniformDensity& f) { return x <= 1.0 / f.a ? f.a : 1.0 / x; },
                        [&](const QuantileTable& f) { return f.cdf(x) / x; },
                    },
                    family);
}

double density_at_zero(const WeightFamily& family) {
  return std::visit(overloaded{
                        [](const Exponential& f) { return f.a; },
                        [](const UniformDensity& f) { return f.a; },
                        [](const QuantileTable& f) { return f.density_at_zero(); },
                    },
                    family);
}

bool is_exponential(const WeightFamily& family) noexcept {
  return std::holds_alternative<Exponential>(family);
}

std::string family_name(const WeightFamily& family) {
  return std::visit(overloaded{
                        [](const Exponential&) { return std::string("exp"); },
                        [](const UniformDensity&) { return std::string("uniform"); },
                        [](const QuantileTable&) { return std::string("table"); },
                    },
                    family);
}

double couple(const CouplingMap& map, double t) {
  if (!(t >= 0.0)) throw DomainError("coupling argument must be nonnegative");
  require_rate(map.rate);
  return std::visit(overloaded{
                        [&](const Exponential& f) { return f.a == map.rate ? t : map.rate * t / f.a; },
                        [&](const UniformDensity& f) { return -std::expm1(-map.rate * t) / f.a; },
                        [&](const QuantileTable& f) {
                          const double y = -std::expm1(-map.rate * t);
                          return y < 1.0 ? f.quantile(y) : f.points().back().second;
                        },
                    },
                    map.target);
}

double edge_weight_by_key(const WeightModel& model, std::uint64_t edge_key) {
  return quantile(model.family, edge_uniform(model.root_seed, edge_key));
}

double edge_weight(const WeightModel& model, const EdgeId& e) {
  return edge_weight_by_key(model, edge_key(e));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) noexcept {
  return mix64(mix64(root ^ mix64(stream + kDimensionSalt)) + index);
}

WeightField seeded_field(const WeightModel& model) {
  return [model](const EdgeId& e) { return edge_weight(model, e); };
}

WeightField coupled_field(const WeightModel& exponential, CouplingMap map) {
  return [exponential, map = std::move(map)](const EdgeId& e) {
    return couple(map, edge_weight(exponential, e));
  };
}

DensityReport verify_density_condition(const WeightModel& model, const DensityCondition& cond,
                                       int grid_size) {
  require_rate(cond.a);
  if (!(cond.C > 0.0)) throw DomainError("declared constant C must be positive");
  if (!(cond.eps0 > 0.0 && cond.eps0 < 1.0)) throw DomainError("eps0 must lie in (0, 1)");
  if (grid_size < 2) throw DomainError("grid needs at least two points");
  if (cdf(model.family, 0.0) > 0.0) throw UnsupportedModel("F has an atom at 0");

  constexpr double kDecades = 12.0;
  DensityReport report;
  for (int j = 0; j < grid_size; ++j) {
    const double x = cond.eps0 * std::pow(10.0, -kDecades * j / (grid_size - 1));
    const double dev = std::abs(cdf_ratio(model.family, x) - cond.a) * std::abs(std::log(x));
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= cond.C;
  return report;
}

}  // namespace fpp
