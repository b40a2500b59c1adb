#include "fpp/eden.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fpp/bounds.hpp"
#include "fpp/errors.hpp"

namespace fpp {

namespace {

// s_i and S are compared with a relative slack so that exact-equality clusters
// (cubes) survive rounding in pow().
constexpr double kIsoSlack = 1e-12;

}  // namespace

ClusterState::ClusterState(int dim, double rate, std::size_t cluster_cap)
    : dim_(dim), rate_(rate), cap_(cluster_cap), dirs_(2u * static_cast<std::uint32_t>(dim - 1)),
      pool_(dim) {
  if (dim < 2) throw DomainError("dimension must be at least 2");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("rate a must be positive and finite");
  const auto origin = LatticePoint::origin(dim);
  const std::uint32_t v = pool_.push(origin.coords(), point_key(origin));
  index_.insert(pool_.key(v), v);
  dead_.emplace_back();
  fenwick_.assign(1, 0);
  fenwick_.push_back(dirs_);
  perimeter_ = dirs_;
}

std::uint32_t ClusterState::find_infected(std::uint32_t base, int axis, Coord delta,
                                          std::uint64_t key) const {
  return index_.find(key, [&](std::uint32_t i) { return pool_.equals_shifted(i, base, axis, delta); });
}

bool ClusterState::is_infected(const LatticePoint& p) const {
  if (p.dim() != dim_) return false;
  return index_.find(point_key(p), [&](std::uint32_t i) { return pool_.equals(i, p.coords()); }) !=
         PointIndex::npos;
}

bool ClusterState::has_perimeter_edge(const LatticePoint& from, const LatticePoint& to) const {
  if (from.dim() != dim_ || to.dim() != dim_ || from[0] != 0 || to[0] != 0) return false;
  int differing = 0;
  for (int k = 1; k < dim_; ++k) {
    const int gap = std::abs(from[k] - to[k]);
    if (gap > 1) return false;
    differing += gap;
  }
  return differing == 1 && is_infected(from) && !is_infected(to);
}

void ClusterState::add_vertex_weight(std::uint32_t vertex, std::int64_t delta) {
  for (std::size_t j = vertex + 1; j < fenwick_.size(); j += j & (~j + 1)) fenwick_[j] += delta;
}

std::pair<std::uint32_t, std::uint64_t> ClusterState::locate(std::uint64_t p) const {
  const std::size_t n = fenwick_.size() - 1;
  std::size_t pos = 0;
  std::int64_t rem = static_cast<std::int64_t>(p);
  for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
    if (pos + step <= n && fenwick_[pos + step] <= rem) {
      pos += step;
      rem -= fenwick_[pos];
    }
  }
  return {static_cast<std::uint32_t>(pos), static_cast<std::uint64_t>(rem)};
}

std::uint32_t ClusterState::nth_alive_dir(std::uint32_t vertex, std::uint64_t rank) const {
  auto dir = static_cast<std::uint32_t>(rank);
  for (std::uint32_t dead : dead_[vertex]) {
    if (dead > dir) break;
    ++dir;
  }
  return dir;
}

void ClusterState::infect(std::uint32_t from, std::uint32_t dir) {
  if (pool_.size() >= cap_)
    throw BudgetExceeded("exploration cluster exceeded " + std::to_string(cap_) + " vertices");
  const int axis = axis_of(dir);
  const Coord delta = delta_of(dir);
  const std::uint64_t key = step_key(pool_.key(from), axis, pool_.at(from)[axis], delta);
  const std::uint32_t v = pool_.push_shifted(from, axis, delta, key);
  index_.insert(key, v);
  scratch_.assign(pool_.at(v).begin(), pool_.at(v).end());
  const auto& c = scratch_;

  std::vector<std::uint32_t> dead;
  auto link = [&](std::uint32_t w, std::uint32_t d) {
    dead.push_back(d);
    auto& back = dead_[w];
    back.insert(std::upper_bound(back.begin(), back.end(), d ^ 1u), d ^ 1u);
    add_vertex_weight(w, -1);
    --perimeter_;
  };
  // Infected neighbours along the support of v.
  for (int k = 1; k < dim_; ++k) {
    if (c[static_cast<std::size_t>(k)] == 0) continue;
    for (Coord dl : {Coord{+1}, Coord{-1}}) {
      const std::uint32_t w = find_infected(v, k, dl, step_key(key, k, c[static_cast<std::size_t>(k)], dl));
      if (w != PointIndex::npos) link(w, dir_of(k, dl));
    }
  }
  // Infected neighbours w = v +- e_k with v_k = 0.
  reduced_index_.for_each(key, [&](std::uint32_t e) {
    const auto [w, k] = reduced_entries_[e];
    const Coord wk = pool_.at(w)[static_cast<std::size_t>(k)];
    if (c[static_cast<std::size_t>(k)] == 0 && pool_.equals_shifted(w, v, k, wk)) link(w, dir_of(k, wk));
  });

  std::sort(dead.begin(), dead.end());
  const std::int64_t alive = static_cast<std::int64_t>(dirs_) - static_cast<std::int64_t>(dead.size());
  dead_.push_back(std::move(dead));
  perimeter_ += static_cast<std::size_t>(alive);

  // Fenwick append: node n covers (n - lowbit(n), n].
  const std::size_t n = fenwick_.size();
  std::int64_t node = alive;
  for (std::size_t j = n - 1; j > n - (n & (~n + 1)); j -= j & (~j + 1)) node += fenwick_[j];
  fenwick_.push_back(node);

  for (int k = 1; k < dim_; ++k) {
    const Coord ck = c[static_cast<std::size_t>(k)];
    if (ck != 1 && ck != -1) continue;
    reduced_entries_.emplace_back(v, k);
    reduced_index_.insert(step_key(key, k, ck, static_cast<Coord>(-ck)),
                          static_cast<std::uint32_t>(reduced_entries_.size() - 1));
  }
}

bool ClusterState::step(double u_time, double u_choice) {
  if (exited_) throw DomainError("exploration already reached H_1");
  const std::size_t i = pool_.size();
  const std::size_t candidates = i + perimeter_;
  unit_elapsed_ += -std::log(u_time) / static_cast<double>(candidates);
  ++steps_;

  std::size_t pick = static_cast<std::size_t>(u_choice * static_cast<double>(candidates));
  if (pick >= candidates) pick = candidates - 1;

  if (pick < i) {
    exited_ = true;
    exit_vertex_ = pool_.point(static_cast<std::uint32_t>(pick)).shifted(0, +1);
    return true;
  }
  const auto [vertex, rank] = locate(pick - i);
  infect(vertex, nth_alive_dir(vertex, rank));
  check_invariants();
  return false;
}

std::size_t ClusterState::recount_perimeter() const {
  std::size_t count = 0;
  for (std::uint32_t v = 0; v < pool_.size(); ++v) {
    for (std::uint32_t d = 0; d < dirs_; ++d) {
      const int ax = axis_of(d);
      const Coord dl = delta_of(d);
      const std::uint64_t nkey = step_key(pool_.key(v), ax, pool_.at(v)[ax], dl);
      if (find_infected(v, ax, dl, nkey) == PointIndex::npos) ++count;
    }
  }
  return count;
}

void ClusterState::check_invariants(bool recount) const {
  const std::size_t i = pool_.size();
  const std::size_t s = perimeter_;
  if (s > (2 * static_cast<std::size_t>(dim_) - 1) * i)
    throw InvariantViolation("perimeter exceeds (2d - 1) i");
  if (dim_ >= 4) {
    const double lower = perimeter_lower_bound(dim_, static_cast<double>(i));
    if (static_cast<double>(s) < lower * (1.0 - kIsoSlack))
      throw InvariantViolation("isoperimetric bound violated: S = " + std::to_string(s) +
                               " < s_i = " + std::to_string(lower) + " at i = " + std::to_string(i));
  }
  if (!recount) return;
  if (recount_perimeter() != s)
    throw InvariantViolation("incremental perimeter count disagrees with a full recount");
  std::size_t listed = 0;
  for (std::uint32_t v = 0; v < i; ++v) {
    const std::size_t alive = dirs_ - dead_[v].size();
    const auto [owner, rank] = locate(listed);
    if (alive > 0 && (owner != v || rank != 0))
      throw InvariantViolation("perimeter index disagrees with per-vertex counts");
    for (std::uint32_t d : dead_[v]) {
      const int ax = axis_of(d);
      const Coord dl = delta_of(d);
      if (find_infected(v, ax, dl, step_key(pool_.key(v), ax, pool_.at(v)[ax], dl)) == PointIndex::npos)
        throw InvariantViolation("a blocked direction leads to a healthy vertex");
    }
    listed += alive;
  }
}

PassageSample sample_s01_eden(int dim, double rate, std::uint64_t seed, const EdenOptions& opts) {
  std::mt19937_64 rng(seed);
  auto s = sample_s01_eden_with(dim, rate, [&] { return uniform_open(rng); }, opts);
  s.seed_used = seed;
  return s;
}

}  // namespace fpp
