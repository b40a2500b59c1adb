#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpp/slab.hpp"
#include "fpp/stats.hpp"
#include "fpp/weights.hpp"

namespace fpp {

enum class Sampler { Eden, Slab };

std::string sampler_name(Sampler s);

struct ExperimentConfig {
  std::vector<int> d_grid;
  WeightModel model;  // its root_seed is ignored; replicates derive from root_seed below
  std::size_t replicates = 1000;
  std::uint64_t root_seed = 0;
  int box_radius = 8;
  std::size_t budget_cap = 10'000'000;
  unsigned threads = 1;
};

/// Moments of s01 at one dimension, plus the normalized statistic
/// X_d = 2ad s01 / log d.
struct SummaryStats {
  int d = 0;
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> variance;
  std::optional<std::pair<double, double>> ci95;  // normal approximation
  double standard_error = 0.0;
  double normalized_mean = 0.0;
  std::optional<double> normalized_var;
};

SummaryStats summarize(std::span<const double> values, int d, double a);

/// X_d = 2ad v / log d.
double normalized(double value, int d, double a);

/// The `replicates` draws of s01 at dimension d, replicate r seeded with
/// derive_seed(root_seed, d, r). SamplerMismatch if Eden is asked for a
/// non-exponential model.
std::vector<PassageSample> collect_samples(const ExperimentConfig& config, int d, Sampler sampler);
std::vector<double> sample_values(const ExperimentConfig& config, int d, Sampler sampler);

std::vector<SummaryStats> run_slab_mc(const ExperimentConfig& config, Sampler sampler);

/// Eden when the model is exponential, otherwise the exact slab search.
Sampler preferred_sampler(const WeightModel& model);

struct ConcentrationPoint {
  int d = 0;
  std::size_t n = 0;
  std::size_t exceed = 0;
  double estimate = 0.0;  // fraction with |X_d - 1| > eta
  double lo = 0.0;        // Wilson 95%
  double hi = 0.0;
};

std::vector<ConcentrationPoint> concentration_curve(const ExperimentConfig& config, double eta);
ConcentrationPoint exceedance(std::span<const double> values, int d, double a, double eta);

struct SubadditivityReport {
  int d = 0;
  int n = 0;
  std::size_t replicates = 0;
  double lhs = 0.0;  // mean T(0, H_n) / n
  double lhs_se = 0.0;
  double rhs = 0.0;  // mean s01
  double rhs_se = 0.0;
  std::size_t pathwise_violations = 0;  // realizations with T(0, H_n) > sum of greedy crossings
  bool mean_ok = false;                 // lhs <= rhs + 3 combined SE
};

/// Per realization: the n greedy crossings and T(0, H_n) in a box that contains
/// them, widened by doubling until two consecutive values agree.
std::vector<SubadditivityReport> subadditivity_check(const ExperimentConfig& config, int n);

struct SearchCrossParams {
  int p = 0;             // search subspace spanned by e_2 .. e_{p+1}
  int n = 0;             // fast-path length, last step along e_1
  double x_threshold = 0.0;
  double y_threshold = 0.0;
};

/// p = floor(d/2), n = floor(3/4 log d), x = 9 log d / (4ad), y = 32 log d / (ad).
SearchCrossParams search_cross_params(int d, double a);

struct SearchCrossReport {
  int d = 0;
  std::size_t replicates = 0;
  SearchCrossParams params;
  std::size_t tau_hits = 0;   // tau_{e_j} <= y
  std::size_t path_hits = 0;  // fast path with T <= x found
  std::size_t fj_hits = 0;    // both
  std::size_t capped = 0;     // searches stopped by the node cap (counted as misses)
  double p_tau_hat = 0.0;
  double cdf_y = 0.0;         // F(y)
  double p_tau_se = 0.0;
  double p_path_hat = 0.0;
  double p_fj_hat = 0.0;
  double p_fj_lo = 0.0;
  double p_fj_hi = 0.0;
  double target = 0.0;        // 4 log d / d
};

/// Estimates P(F_j) for j = d (the last axis). DomainError if d < 8 or replicates == 0.
SearchCrossReport search_cross_probe(int d, const WeightModel& model, std::size_t replicates,
                                     std::uint64_t root_seed, unsigned threads = 1,
                                     std::size_t node_cap = 1'000'000);

struct UiTailPoint {
  int d = 0;
  std::size_t n = 0;
  double M = 0.0;
  double estimate = 0.0;  // mean of X_d 1{X_d >= M}
  double standard_error = 0.0;
};

std::vector<UiTailPoint> ui_tail(const ExperimentConfig& config, double M);
UiTailPoint truncated_mean(std::span<const double> values, int d, double a, double M);

}  // namespace fpp
