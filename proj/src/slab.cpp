#include "fpp/slab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A weigher returns the weight of the edge between pool vertex v and
// v + delta * e_axis, whose key is nbr_key.
struct ModelWeigher {
  const WeightModel& model;
  double operator()(const PointPool& pool, std::uint32_t v, int axis, Coord delta,
                    std::uint64_t nbr_key) const {
    const std::uint64_t base = delta > 0 ? pool.key(v) : nbr_key;
    return edge_weight_by_key(model, edge_key_from_base(base, axis));
  }
};

struct FieldWeigher {
  const WeightField& field;
  double operator()(const PointPool& pool, std::uint32_t v, int axis, Coord delta,
                    std::uint64_t /*nbr_key*/) const {
    LatticePoint p = pool.point(v);
    return field(EdgeId{delta > 0 ? std::move(p) : p.shifted(axis, delta), axis});
  }
};

template <class Weigher>
class LazyDijkstra {
 public:
  LazyDijkstra(int dim, Weigher weigher, const SearchOptions& opts)
      : pool_(dim), weigher_(std::move(weigher)), cap_(opts.settled_cap),
        heap_(HeapOrder{&pool_}) {}

  const PointPool& pool() const noexcept { return pool_; }
  std::size_t settled_count() const noexcept { return settled_count_; }
  double dist(std::uint32_t v) const noexcept { return dist_[v]; }

  void add_source(std::span<const Coord> coords) {
    const std::uint32_t v = pool_.push(coords, point_key(coords));
    index_.insert(pool_.key(v), v);
    dist_.push_back(0.0);
    settled_.push_back(false);
    heap_.push({0.0, v});
  }

  /// Smallest tentative distance among unsettled vertices (infinity if none).
  double peek() {
    drop_stale();
    return heap_.empty() ? kInf : heap_.top().dist;
  }

  /// Settles and returns the closest unsettled vertex; call after peek() < inf.
  std::uint32_t settle_next() {
    drop_stale();
    const std::uint32_t v = heap_.top().vertex;
    heap_.pop();
    settled_[v] = true;
    if (++settled_count_ > cap_)
      throw BudgetExceeded("search settled more than " + std::to_string(cap_) + " vertices");
    return v;
  }

  /// Weight of the edge from v to v + delta * e_axis.
  double edge(std::uint32_t v, int axis, Coord delta) {
    const std::uint64_t nbr = step_key(pool_.key(v), axis, pool_.at(v)[axis], delta);
    return weigher_(pool_, v, axis, delta, nbr);
  }

  void relax(std::uint32_t v, int axis, Coord delta) {
    const Coord from = pool_.at(v)[static_cast<std::size_t>(axis)];
    const std::uint64_t nbr_key = step_key(pool_.key(v), axis, from, delta);
    std::uint32_t w = index_.find(nbr_key, [&](std::uint32_t i) {
      return pool_.equals_shifted(i, v, axis, delta);
    });
    if (w != PointIndex::npos && settled_[w]) return;
    const double nd = dist_[v] + weigher_(pool_, v, axis, delta, nbr_key);
    if (w == PointIndex::npos) {
      w = pool_.push_shifted(v, axis, delta, nbr_key);
      index_.insert(nbr_key, w);
      dist_.push_back(kInf);
      settled_.push_back(false);
    }
    if (nd < dist_[w]) {
      dist_[w] = nd;
      heap_.push({nd, w});
    }
  }

 private:
  struct Entry {
    double dist;
    std::uint32_t vertex;
  };
  // priority_queue keeps the "largest" on top, so order is reversed.
  struct HeapOrder {
    const PointPool* pool;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.dist != b.dist) return a.dist > b.dist;
      auto pa = pool->at(a.vertex);
      auto pb = pool->at(b.vertex);
      return std::lexicographical_compare(pb.begin(), pb.end(), pa.begin(), pa.end());
    }
  };

  void drop_stale() {
    while (!heap_.empty()) {
      const Entry& top = heap_.top();
      if (!settled_[top.vertex] && top.dist == dist_[top.vertex]) return;
      heap_.pop();
    }
  }

  PointPool pool_;
  PointIndex index_;
  Weigher weigher_;
  std::size_t cap_;
  std::vector<double> dist_;
  std::vector<bool> settled_;
  std::size_t settled_count_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, HeapOrder> heap_;
};

Coord in_plane_reach(std::span<const Coord> c) {
  Coord r = 0;
  for (std::size_t j = 1; j < c.size(); ++j) r = std::max(r, static_cast<Coord>(std::abs(c[j])));
  return r;
}

template <class Weigher>
PassageSample crossing(Weigher weigher, const LatticePoint& start, HyperplaneIndex k,
                       const SearchOptions& opts) {
  if (hyperplane_index(start) != k) throw DomainError("start vertex is not in H_k");
  const int dim = start.dim();
  LazyDijkstra<Weigher> search(dim, std::move(weigher), opts);
  search.add_source(start.coords());

  double best_exit = kInf;
  std::uint32_t best_vertex = PointIndex::npos;
  Coord reach = 0;
  std::size_t stop_at = 0;  // settled count at which early termination may happen

  for (;;) {
    const double next = search.peek();
    if (best_exit <= next && search.settled_count() >= stop_at) {
      if (stop_at > 0 || opts.continue_factor <= 1.0) break;
      stop_at = static_cast<std::size_t>(std::ceil(opts.continue_factor *
                                                   static_cast<double>(search.settled_count())));
      continue;
    }
    const std::uint32_t v = search.settle_next();
    reach = std::max(reach, in_plane_reach(search.pool().at(v)));

    const double exit = search.dist(v) + search.edge(v, 0, +1);
    if (exit < best_exit ||
        (exit == best_exit && best_vertex != PointIndex::npos &&
         std::ranges::lexicographical_compare(search.pool().at(v),
                                                                   search.pool().at(best_vertex)))) {
      best_exit = exit;
      best_vertex = v;
    }
    for (int axis = 1; axis < dim; ++axis) {
      search.relax(v, axis, +1);
      search.relax(v, axis, -1);
    }
  }

  PassageSample out;
  out.value = best_exit;
  out.exit_vertex = search.pool().point(best_vertex).shifted(0, +1);
  out.settled_count = search.settled_count();
  out.dimension = dim;
  out.reach = reach;
  return out;
}

template <class Weigher>
double to_hyperplane(Weigher weigher, int dim, HyperplaneIndex n, int box_radius,
                     const SearchOptions& opts) {
  if (n.n < 1) throw DomainError("target hyperplane index must be at least 1");
  if (box_radius < 0) throw DomainError("box radius must be nonnegative");
  LazyDijkstra<Weigher> search(dim, std::move(weigher), opts);
  search.add_source(LatticePoint::origin(dim).coords());
  while (search.peek() < kInf) {
    const std::uint32_t v = search.settle_next();
    // relax() may grow the pool, so keep a copy rather than a view.
    const std::vector<Coord> c(search.pool().at(v).begin(), search.pool().at(v).end());
    if (c[0] == n.n) return search.dist(v);
    for (int axis = 0; axis < dim; ++axis) {
      const Coord lo = axis == 0 ? 0 : -box_radius;
      const Coord hi = axis == 0 ? static_cast<Coord>(n.n) : box_radius;
      if (c[axis] < hi) search.relax(v, axis, +1);
      if (c[axis] > lo) search.relax(v, axis, -1);
    }
  }
  throw DomainError("hyperplane unreachable inside the box");
}

template <class Weigher>
double to_point(Weigher weigher, const LatticePoint& x, const LatticePoint& y, int box_radius,
                const SearchOptions& opts) {
  if (x.dim() != y.dim()) throw DomainError("points have different dimensions");
  if (x == y) throw DomainError("point_to_point_time needs distinct endpoints");
  if (box_radius < 0) throw DomainError("box radius must be nonnegative");
  const int dim = x.dim();
  LazyDijkstra<Weigher> search(dim, std::move(weigher), opts);
  search.add_source(x.coords());
  while (search.peek() < kInf) {
    const std::uint32_t v = search.settle_next();
    // relax() may grow the pool, so keep a copy rather than a view.
    const std::vector<Coord> c(search.pool().at(v).begin(), search.pool().at(v).end());
    if (std::ranges::equal(c, y.coords())) return search.dist(v);
    for (int axis = 0; axis < dim; ++axis) {
      const Coord lo = std::min(x[axis], y[axis]) - box_radius;
      const Coord hi = std::max(x[axis], y[axis]) + box_radius;
      if (c[axis] < hi) search.relax(v, axis, +1);
      if (c[axis] > lo) search.relax(v, axis, -1);
    }
  }
  throw DomainError("target unreachable inside the box");
}

template <class Cross>
std::vector<PassageSample> concatenate(Cross&& cross, int dim, int n) {
  if (n < 1) throw DomainError("greedy concatenation needs n >= 1");
  std::vector<PassageSample> out;
  out.reserve(static_cast<std::size_t>(n));
  LatticePoint v = LatticePoint::origin(dim);
  for (int k = 0; k < n; ++k) {
    out.push_back(cross(v, HyperplaneIndex{k}));
    v = out.back().exit_vertex;
  }
  return out;
}

}  // namespace

PassageSample slab_crossing_time(const WeightModel& model, const LatticePoint& start,
                                 HyperplaneIndex k, const SearchOptions& opts) {
  auto s = crossing(ModelWeigher{model}, start, k, opts);
  s.seed_used = model.root_seed;
  return s;
}

PassageSample slab_crossing_time(const WeightField& field, const LatticePoint& start,
                                 HyperplaneIndex k, const SearchOptions& opts) {
  return crossing(FieldWeigher{field}, start, k, opts);
}

double point_to_hyperplane_time(const WeightModel& model, int dim, HyperplaneIndex n,
                                int box_radius, const SearchOptions& opts) {
  return to_hyperplane(ModelWeigher{model}, dim, n, box_radius, opts);
}

double point_to_hyperplane_time(const WeightField& field, int dim, HyperplaneIndex n,
                                int box_radius, const SearchOptions& opts) {
  return to_hyperplane(FieldWeigher{field}, dim, n, box_radius, opts);
}

double point_to_point_time(const WeightModel& model, const LatticePoint& x, const LatticePoint& y,
                           int box_radius, const SearchOptions& opts) {
  return to_point(ModelWeigher{model}, x, y, box_radius, opts);
}

double point_to_point_time(const WeightField& field, const LatticePoint& x, const LatticePoint& y,
                           int box_radius, const SearchOptions& opts) {
  return to_point(FieldWeigher{field}, x, y, box_radius, opts);
}

std::vector<PassageSample> greedy_concatenation(const WeightModel& model, int dim, int n,
                                                const SearchOptions& opts) {
  return concatenate(
      [&](const LatticePoint& v, HyperplaneIndex k) { return slab_crossing_time(model, v, k, opts); },
      dim, n);
}

std::vector<PassageSample> greedy_concatenation(const WeightField& field, int dim, int n,
                                                const SearchOptions& opts) {
  return concatenate(
      [&](const LatticePoint& v, HyperplaneIndex k) { return slab_crossing_time(field, v, k, opts); },
      dim, n);
}

}  // namespace fpp
