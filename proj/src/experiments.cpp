#include "fpp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpp/eden.hpp"
#include "fpp/errors.hpp"

namespace fpp {

namespace {

void validate(const ExperimentConfig& config) {
  if (config.replicates < 1) throw DomainError("replicates must be at least 1");
  if (config.d_grid.empty()) throw DomainError("dimension grid is empty");
  for (int d : config.d_grid)
    if (d < 2) throw DomainError("every dimension must be at least 2");
}

double rate_of(const WeightModel& model) {
  const double a = density_at_zero(model.family);
  if (!(a > 0.0) || !std::isfinite(a)) throw UnsupportedModel("model has no finite positive density at 0");
  return a;
}

// Greedy sums and box-limited passage times are sums of the same edges taken
// in different association orders.
bool exceeds(double lhs, double rhs) { return lhs > rhs * (1.0 + 1e-12); }

}  // namespace

std::string sampler_name(Sampler s) { return s == Sampler::Eden ? "eden" : "slab"; }

double normalized(double value, int d, double a) {
  return 2.0 * a * d * value / std::log(static_cast<double>(d));
}

SummaryStats summarize(std::span<const double> values, int d, double a) {
  const Moments m = moments(values);
  SummaryStats s;
  s.d = d;
  s.n = m.n;
  s.mean = m.mean;
  s.variance = m.variance;
  s.standard_error = m.standard_error();
  if (m.variance) s.ci95 = std::pair{m.mean - kZ95 * s.standard_error, m.mean + kZ95 * s.standard_error};
  const double scale = 2.0 * a * d / std::log(static_cast<double>(d));
  s.normalized_mean = scale * m.mean;
  if (m.variance) s.normalized_var = scale * scale * *m.variance;
  return s;
}

Sampler preferred_sampler(const WeightModel& model) {
  return is_exponential(model.family) ? Sampler::Eden : Sampler::Slab;
}

std::vector<PassageSample> collect_samples(const ExperimentConfig& config, int d, Sampler sampler) {
  if (sampler == Sampler::Eden && !is_exponential(config.model.family))
    throw SamplerMismatch("the exploration sampler needs exponential weights");
  std::vector<PassageSample> out(config.replicates);
  const auto origin = LatticePoint::origin(d);
  parallel_for(config.replicates, config.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(config.root_seed, static_cast<std::uint64_t>(d), r);
    if (sampler == Sampler::Eden) {
      out[r] = sample_s01_eden(d, std::get<Exponential>(config.model.family).a, seed);
    } else {
      const WeightModel model{config.model.family, seed};
      out[r] = slab_crossing_time(model, origin, HyperplaneIndex{0}, {.settled_cap = config.budget_cap});
    }
  });
  return out;
}

std::vector<double> sample_values(const ExperimentConfig& config, int d, Sampler sampler) {
  const auto samples = collect_samples(config, d, sampler);
  std::vector<double> values(samples.size());
  std::transform(samples.begin(), samples.end(), values.begin(), [](const auto& s) { return s.value; });
  return values;
}

std::vector<SummaryStats> run_slab_mc(const ExperimentConfig& config, Sampler sampler) {
  validate(config);
  const double a = rate_of(config.model);
  std::vector<SummaryStats> out;
  for (int d : config.d_grid) out.push_back(summarize(sample_values(config, d, sampler), d, a));
  return out;
}

ConcentrationPoint exceedance(std::span<const double> values, int d, double a, double eta) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  ConcentrationPoint c;
  c.d = d;
  c.n = values.size();
  for (double v : values)
    if (std::abs(normalized(v, d, a) - 1.0) > eta) ++c.exceed;
  c.estimate = c.n ? static_cast<double>(c.exceed) / static_cast<double>(c.n) : 0.0;
  std::tie(c.lo, c.hi) = wilson_interval(c.exceed, c.n);
  return c;
}

std::vector<ConcentrationPoint> concentration_curve(const ExperimentConfig& config, double eta) {
  validate(config);
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  const double a = rate_of(config.model);
  const Sampler sampler = preferred_sampler(config.model);
  std::vector<ConcentrationPoint> out;
  for (int d : config.d_grid) out.push_back(exceedance(sample_values(config, d, sampler), d, a, eta));
  return out;
}

std::vector<SubadditivityReport> subadditivity_check(const ExperimentConfig& config, int n) {
  validate(config);
  if (n < 1) throw DomainError("n must be at least 1");
  constexpr int kMaxRadius = 1 << 12;
  const SearchOptions opts{.settled_cap = config.budget_cap};

  std::vector<SubadditivityReport> out;
  for (int d : config.d_grid) {
    std::vector<double> per_step(config.replicates);
    std::vector<double> first(config.replicates);
    std::vector<char> violated(config.replicates, 0);
    parallel_for(config.replicates, config.threads, [&](std::size_t r) {
      const WeightModel model{config.model.family,
                              derive_seed(config.root_seed, static_cast<std::uint64_t>(d), r)};
      const auto greedy = greedy_concatenation(model, d, n, opts);
      double total = 0.0;
      Coord reach = 0;
      for (const auto& s : greedy) {
        total += s.value;
        reach = std::max(reach, s.reach);
      }
      int radius = std::max<int>(config.box_radius, reach);
      double t = point_to_hyperplane_time(model, d, HyperplaneIndex{n}, radius, opts);
      while (radius < kMaxRadius) {
        const double wider = point_to_hyperplane_time(model, d, HyperplaneIndex{n}, 2 * radius, opts);
        radius *= 2;
        if (wider == t) break;
        t = wider;
      }
      per_step[r] = t / n;
      first[r] = greedy.front().value;
      violated[r] = exceeds(t, total) ? 1 : 0;
    });

    SubadditivityReport rep;
    rep.d = d;
    rep.n = n;
    rep.replicates = config.replicates;
    const Moments lhs = moments(per_step);
    const Moments rhs = moments(first);
    rep.lhs = lhs.mean;
    rep.lhs_se = lhs.standard_error();
    rep.rhs = rhs.mean;
    rep.rhs_se = rhs.standard_error();
    rep.pathwise_violations = static_cast<std::size_t>(std::count(violated.begin(), violated.end(), 1));
    rep.mean_ok = rep.lhs <= rep.rhs + 3.0 * std::hypot(rep.lhs_se, rep.rhs_se);
    out.push_back(rep);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search and cross

SearchCrossParams search_cross_params(int d, double a) {
  const double log_d = std::log(static_cast<double>(d));
  SearchCrossParams p;
  p.p = d / 2;
  p.n = static_cast<int>(std::floor(0.75 * log_d));
  p.x_threshold = 9.0 * log_d / (4.0 * a * d);
  p.y_threshold = 32.0 * log_d / (a * d);
  return p;
}

namespace {

enum class PathOutcome { Found, NotFound, Capped };

// Depth-first enumeration of paths from `start` with at most n - 1 steps along
// +-e_2 .. +-e_{p+1} followed by one +e_1 step, pruning partial sums above x.
// Cheaper edges are tried first.
class FastPathSearch {
 public:
  FastPathSearch(const WeightModel& model, int dim, const SearchCrossParams& params, std::size_t cap)
      : model_(model), params_(params), cap_(cap), coords_(static_cast<std::size_t>(dim), 0) {}

  PathOutcome run(int start_axis) {
    std::fill(coords_.begin(), coords_.end(), 0);
    coords_[static_cast<std::size_t>(start_axis)] = 1;
    nodes_ = 0;
    capped_ = false;
    const bool found = visit(point_key(coords_), 0.0, params_.n - 1);
    if (found) return PathOutcome::Found;
    return capped_ ? PathOutcome::Capped : PathOutcome::NotFound;
  }

 private:
  bool visit(std::uint64_t key, double cost, int steps_left) {
    if (++nodes_ > cap_) {
      capped_ = true;
      return false;
    }
    if (cost + edge_weight_by_key(model_, edge_key_from_base(key, 0)) <= params_.x_threshold) return true;
    if (steps_left == 0) return false;

    struct Move {
      double weight;
      int axis;
      Coord delta;
      std::uint64_t key;
    };
    std::vector<Move> moves;
    for (int axis = 1; axis <= params_.p; ++axis) {
      const Coord c = coords_[static_cast<std::size_t>(axis)];
      for (Coord delta : {Coord{+1}, Coord{-1}}) {
        const std::uint64_t nkey = step_key(key, axis, c, delta);
        const std::uint64_t base = delta > 0 ? key : nkey;
        const double w = edge_weight_by_key(model_, edge_key_from_base(base, axis));
        if (cost + w <= params_.x_threshold) moves.push_back({w, axis, delta, nkey});
      }
    }
    std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
      return a.weight != b.weight ? a.weight < b.weight
                                  : std::pair(a.axis, a.delta) < std::pair(b.axis, b.delta);
    });
    for (const Move& m : moves) {
      coords_[static_cast<std::size_t>(m.axis)] += m.delta;
      const bool found = visit(m.key, cost + m.weight, steps_left - 1);
      coords_[static_cast<std::size_t>(m.axis)] -= m.delta;
      if (found) return true;
      if (capped_) return false;
    }
    return false;
  }

  const WeightModel& model_;
  SearchCrossParams params_;
  std::size_t cap_;
  std::vector<Coord> coords_;
  std::size_t nodes_ = 0;
  bool capped_ = false;
};

}  // namespace

SearchCrossReport search_cross_probe(int d, const WeightModel& model, std::size_t replicates,
                                     std::uint64_t root_seed, unsigned threads,
                                     std::size_t node_cap) {
  if (d < 8) throw DomainError("search-and-cross needs d >= 8");
  if (replicates == 0) throw DomainError("replicates must be at least 1");
  const double a = rate_of(model);

  SearchCrossReport rep;
  rep.d = d;
  rep.replicates = replicates;
  rep.params = search_cross_params(d, a);
  const int j_axis = d - 1;  // e_d, one of e_{p+2} .. e_d
  const std::uint64_t origin_key = point_key(LatticePoint::origin(d));

  std::vector<char> tau_hit(replicates), outcome(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const WeightModel m{model.family, derive_seed(root_seed, static_cast<std::uint64_t>(d), r)};
    const double tau = edge_weight_by_key(m, edge_key_from_base(origin_key, j_axis));
    tau_hit[r] = tau <= rep.params.y_threshold;
    FastPathSearch search(m, d, rep.params, node_cap);
    outcome[r] = static_cast<char>(search.run(j_axis));
  });

  for (std::size_t r = 0; r < replicates; ++r) {
    const bool path = outcome[r] == static_cast<char>(PathOutcome::Found);
    rep.tau_hits += tau_hit[r] ? 1 : 0;
    rep.path_hits += path ? 1 : 0;
    rep.fj_hits += (tau_hit[r] && path) ? 1 : 0;
    rep.capped += outcome[r] == static_cast<char>(PathOutcome::Capped) ? 1 : 0;
  }
  const double n = static_cast<double>(replicates);
  rep.p_tau_hat = static_cast<double>(rep.tau_hits) / n;
  rep.cdf_y = cdf(model.family, rep.params.y_threshold);
  rep.p_tau_se = std::sqrt(rep.cdf_y * (1.0 - rep.cdf_y) / n);
  rep.p_path_hat = static_cast<double>(rep.path_hits) / n;
  rep.p_fj_hat = static_cast<double>(rep.fj_hits) / n;
  std::tie(rep.p_fj_lo, rep.p_fj_hi) = wilson_interval(rep.fj_hits, replicates);
  rep.target = 4.0 * std::log(static_cast<double>(d)) / d;
  return rep;
}

// ---------------------------------------------------------------------------

UiTailPoint truncated_mean(std::span<const double> values, int d, double a, double M) {
  if (!(M > 0.0)) throw DomainError("M must be positive");
  std::vector<double> kept(values.size());
  std::transform(values.begin(), values.end(), kept.begin(), [&](double v) {
    const double x = normalized(v, d, a);
    return x >= M ? x : 0.0;
  });
  const Moments m = moments(kept);
  return UiTailPoint{d, m.n, M, m.mean, m.standard_error()};
}

std::vector<UiTailPoint> ui_tail(const ExperimentConfig& config, double M) {
  validate(config);
  if (!(M > 0.0)) throw DomainError("M must be positive");
  const double a = rate_of(config.model);
  const Sampler sampler = preferred_sampler(config.model);
  std::vector<UiTailPoint> out;
  for (int d : config.d_grid) out.push_back(truncated_mean(sample_values(config, d, sampler), d, a, M));
  return out;
}

}  // namespace fpp
