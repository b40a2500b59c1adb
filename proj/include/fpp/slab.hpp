#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

/// One realization of a slab crossing H_k -> H_{k+1}.
struct PassageSample {
  double value = 0.0;
  LatticePoint exit_vertex;  // lies in H_{k+1}
  std::size_t settled_count = 0;
  int dimension = 0;
  std::uint64_t seed_used = 0;
  /// Largest |x_j|, j >= 2, over settled vertices. A box of this radius
  /// contains the optimal crossing path.
  Coord reach = 0;
};

struct SearchOptions {
  std::size_t settled_cap = 10'000'000;
  /// Keep settling until this multiple of the stopping count is reached.
  /// The returned value must not change; used to test early termination.
  double continue_factor = 1.0;
};

// Every search is a best-first (Dijkstra) sweep over the implicit lattice with
// weights drawn lazily from the field on first touch. Ties in the frontier
// break by lexicographic vertex order.

/// Exact non-backtracking crossing time: infimum over paths from `start` whose
/// non-terminal vertices stay in H_k and whose last edge is +e_1. Stops once the
/// best exit value is <= the smallest tentative in-plane distance.
PassageSample slab_crossing_time(const WeightModel& model, const LatticePoint& start,
                                 HyperplaneIndex k, const SearchOptions& opts = {});
PassageSample slab_crossing_time(const WeightField& field, const LatticePoint& start,
                                 HyperplaneIndex k, const SearchOptions& opts = {});

/// Passage time from 0 to H_n through the box |x_j| <= box_radius (j >= 2),
/// 0 <= x_1 <= n.
double point_to_hyperplane_time(const WeightModel& model, int dim, HyperplaneIndex n,
                                int box_radius, const SearchOptions& opts = {});
double point_to_hyperplane_time(const WeightField& field, int dim, HyperplaneIndex n,
                                int box_radius, const SearchOptions& opts = {});

/// T(x, y) restricted to the bounding box of {x, y} grown by box_radius.
double point_to_point_time(const WeightModel& model, const LatticePoint& x, const LatticePoint& y,
                           int box_radius, const SearchOptions& opts = {});
double point_to_point_time(const WeightField& field, const LatticePoint& x, const LatticePoint& y,
                           int box_radius, const SearchOptions& opts = {});

/// n successive crossings on one realization: crossing k starts in H_k at the
/// exit vertex of crossing k-1 (the first at the origin).
std::vector<PassageSample> greedy_concatenation(const WeightModel& model, int dim, int n,
                                                const SearchOptions& opts = {});
std::vector<PassageSample> greedy_concatenation(const WeightField& field, int dim, int n,
                                                const SearchOptions& opts = {});

}  // namespace fpp
