#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/slab.hpp"
#include "fpp/weights.hpp"

namespace fpp {

/// State of the memoryless exploration of H_0 under Exponential(a) weights.
///
/// The cluster holds i infected vertices and S in-plane perimeter edges (edges
/// of H_0 from an infected to a healthy vertex). Every infected vertex also owns
/// one exit edge to H_1, so the next event is a uniform pick among i + S edges
/// after an Exponential(a (i + S)) wait. Candidates are ordered as the i exits by
/// infection order, then the perimeter edges by (vertex, direction).
class ClusterState {
 public:
  ClusterState(int dim, double rate, std::size_t cluster_cap = 1'000'000);

  int dim() const noexcept { return dim_; }
  double rate() const noexcept { return rate_; }
  std::size_t infected_count() const noexcept { return pool_.size(); }
  std::size_t perimeter_count() const noexcept { return perimeter_; }
  std::size_t exit_candidates() const noexcept { return pool_.size(); }
  std::size_t step_count() const noexcept { return steps_; }
  /// Elapsed time at rate a. Kept internally at rate 1 and divided once, so
  /// rate-a runs are exactly rate-1 runs scaled by 1/a.
  double elapsed() const noexcept { return unit_elapsed_ / rate_; }
  bool exited() const noexcept { return exited_; }
  /// The H_1 vertex reached; meaningful once exited().
  const LatticePoint& exit_vertex() const noexcept { return exit_vertex_; }

  LatticePoint infected_point(std::size_t j) const { return pool_.point(static_cast<std::uint32_t>(j)); }
  bool is_infected(const LatticePoint& p) const;
  bool has_perimeter_edge(const LatticePoint& from, const LatticePoint& to) const;

  /// One exponential race. u_time and u_choice are uniforms in (0, 1).
  /// Returns true when the crossed edge leads to H_1; the state is then frozen.
  bool step(double u_time, double u_choice);

  /// S counted from scratch by scanning the in-plane boundary of the cluster.
  std::size_t recount_perimeter() const;
  /// Throws InvariantViolation unless the bookkeeping and the bounds
  /// s_i <= S <= (2d - 1) i hold (the lower bound is enforced for d >= 4).
  void check_invariants(bool recount = false) const;

 private:
  // Direction dir in [0, 2(d-1)) is axis 1 + dir / 2, sign + for even dir;
  // dir ^ 1 is the opposite direction.
  int axis_of(std::uint32_t dir) const noexcept { return 1 + static_cast<int>(dir / 2); }
  Coord delta_of(std::uint32_t dir) const noexcept { return (dir & 1u) ? -1 : +1; }
  static std::uint32_t dir_of(int axis, Coord delta) noexcept {
    return 2u * static_cast<std::uint32_t>(axis - 1) + (delta < 0 ? 1u : 0u);
  }
  std::uint32_t find_infected(std::uint32_t base, int axis, Coord delta, std::uint64_t key) const;
  void infect(std::uint32_t from, std::uint32_t dir);
  void add_vertex_weight(std::uint32_t vertex, std::int64_t delta);
  /// Vertex owning perimeter slot p in vertex order, and the slot's rank within it.
  std::pair<std::uint32_t, std::uint64_t> locate(std::uint64_t p) const;
  std::uint32_t nth_alive_dir(std::uint32_t vertex, std::uint64_t rank) const;

  int dim_;
  double rate_;
  std::size_t cap_;
  std::uint32_t dirs_;  // 2 (d - 1)
  PointPool pool_;
  PointIndex index_;
  // Infected vertices v with v_k = +-1 (k >= 1), keyed by key(v with v_k set to 0):
  // looking up key(w) yields the infected neighbours of w off its support.
  PointIndex reduced_index_;
  std::vector<std::pair<std::uint32_t, int>> reduced_entries_;  // (vertex, k)
  std::vector<std::vector<std::uint32_t>> dead_;  // sorted directions leading to infected vertices
  std::vector<std::int64_t> fenwick_;             // 1-based sums of per-vertex perimeter counts
  std::size_t perimeter_ = 0;
  std::vector<Coord> scratch_;
  double unit_elapsed_ = 0.0;
  std::size_t steps_ = 0;
  bool exited_ = false;
  LatticePoint exit_vertex_;
};

/// Draws a uniform in (0, 1) from any 64-bit engine; bit-exact across platforms.
template <class Engine>
double uniform_open(Engine& rng) {
  return uniform_from_bits(static_cast<std::uint64_t>(rng()));
}

template <class Engine>
bool dhar_step(ClusterState& state, Engine& rng) {
  const double u_time = uniform_open(rng);
  const double u_choice = uniform_open(rng);
  return state.step(u_time, u_choice);
}

struct EdenOptions {
  std::size_t cluster_cap = 1'000'000;
};

/// One draw of the non-backtracking crossing time under Exponential(a), by running
/// the exploration from the singleton {0}. The engine is std::mt19937_64 seeded
/// with `seed`; the sample records it in seed_used.
PassageSample sample_s01_eden(int dim, double rate, std::uint64_t seed, const EdenOptions& opts = {});

/// Same, driven by a caller-supplied uniform source (each call returns a value in (0, 1)).
template <class UniformSource>
PassageSample sample_s01_eden_with(int dim, double rate, UniformSource&& uniform,
                                   const EdenOptions& opts = {}) {
  ClusterState state(dim, rate, opts.cluster_cap);
  for (;;) {
    const double u_time = uniform();
    const double u_choice = uniform();
    if (state.step(u_time, u_choice)) break;
  }
  PassageSample out;
  out.value = state.elapsed();
  out.exit_vertex = state.exit_vertex();
  out.settled_count = state.infected_count();
  out.dimension = dim;
  return out;
}

}  // namespace fpp
