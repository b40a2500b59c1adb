#include "fpp/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdlib>
#include <sstream>

#include "fpp/errors.hpp"

namespace fpp {

LatticePoint::LatticePoint(std::vector<Coord> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw DomainError("lattice dimension must be at least 2");
}

LatticePoint::LatticePoint(std::initializer_list<Coord> coords)
    : LatticePoint(std::vector<Coord>(coords)) {}

LatticePoint LatticePoint::origin(int dim) {
  if (dim < 2) throw DomainError("lattice dimension must be at least 2");
  return LatticePoint(std::vector<Coord>(static_cast<std::size_t>(dim), 0));
}

LatticePoint LatticePoint::unit(int dim, int axis) {
  auto p = origin(dim);
  p.coords_[static_cast<std::size_t>(axis)] = 1;
  return p;
}

LatticePoint LatticePoint::shifted(int axis, Coord delta) const {
  assert(axis >= 0 && axis < dim());
  LatticePoint q = *this;
  auto& c = q.coords_[static_cast<std::size_t>(axis)];
  assert(std::abs(static_cast<std::int64_t>(c) + delta) < (std::int64_t{1} << 30));
  c += delta;
  return q;
}

std::string LatticePoint::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < coords_.size(); ++k) os << (k ? "," : "") << coords_[k];
  os << ')';
  return os.str();
}

std::vector<LatticePoint> neighbors(const LatticePoint& p) {
  std::vector<LatticePoint> out;
  out.reserve(2 * static_cast<std::size_t>(p.dim()));
  for (int k = 0; k < p.dim(); ++k) {
    out.push_back(p.shifted(k, +1));
    out.push_back(p.shifted(k, -1));
  }
  return out;
}

EdgeId canonical_edge(const LatticePoint& p, const LatticePoint& q) {
  if (p.dim() != q.dim()) throw NotAdjacent("points have different dimensions");
  int axis = -1;
  std::int64_t l1 = 0;
  for (int k = 0; k < p.dim(); ++k) {
    const std::int64_t diff = std::abs(static_cast<std::int64_t>(p[k]) - q[k]);
    if (diff != 0) axis = k;
    l1 += diff;
  }
  if (l1 != 1) throw NotAdjacent(p.to_string() + " and " + q.to_string() + " are not adjacent");
  return EdgeId{p[axis] < q[axis] ? p : q, axis};
}

HyperplaneIndex hyperplane_index(const LatticePoint& p) { return HyperplaneIndex{p[0]}; }

std::uint64_t point_key(std::span<const Coord> coords) noexcept {
  std::uint64_t key = static_cast<std::uint64_t>(coords.size()) * kDimensionSalt;
  for (std::size_t k = 0; k < coords.size(); ++k) key += coord_term(static_cast<int>(k), coords[k]);
  return key;
}

// ---------------------------------------------------------------------------

std::uint32_t PointPool::push(std::span<const Coord> coords, std::uint64_t key) {
  assert(static_cast<int>(coords.size()) == dim_);
  coords_.insert(coords_.end(), coords.begin(), coords.end());
  keys_.push_back(key);
  return static_cast<std::uint32_t>(keys_.size() - 1);
}

std::uint32_t PointPool::push_shifted(std::uint32_t base, int axis, Coord delta, std::uint64_t key) {
  const std::size_t from = static_cast<std::size_t>(base) * dim_;
  coords_.resize(coords_.size() + static_cast<std::size_t>(dim_));
  // resize may reallocate, so copy by index
  std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(from), dim_,
              coords_.end() - dim_);
  coords_[coords_.size() - static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)] += delta;
  keys_.push_back(key);
  return static_cast<std::uint32_t>(keys_.size() - 1);
}

LatticePoint PointPool::point(std::uint32_t i) const {
  auto c = at(i);
  return LatticePoint(std::vector<Coord>(c.begin(), c.end()));
}

bool PointPool::equals_shifted(std::uint32_t i, std::uint32_t base, int axis, Coord delta) const noexcept {
  const Coord* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
  const Coord* b = coords_.data() + static_cast<std::size_t>(base) * dim_;
  for (int k = 0; k < dim_; ++k) {
    const Coord want = k == axis ? b[k] + delta : b[k];
    if (a[k] != want) return false;
  }
  return true;
}

bool PointPool::equals(std::uint32_t i, std::span<const Coord> coords) const noexcept {
  return std::equal(coords.begin(), coords.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i) * dim_);
}

// ---------------------------------------------------------------------------

void PointIndex::reset(std::size_t capacity) {
  keys_.assign(capacity, 0);
  values_.assign(capacity, npos);
  mask_ = capacity - 1;
  shift_ = 64 - std::countr_zero(capacity);
  size_ = 0;
}

void PointIndex::insert(std::uint64_t key, std::uint32_t value) {
  if (2 * (size_ + 1) > values_.size()) {
    auto old_keys = std::move(keys_);
    auto old_values = std::move(values_);
    reset(old_values.size() * 2);
    for (std::size_t s = 0; s < old_values.size(); ++s)
      if (old_values[s] != npos) insert(old_keys[s], old_values[s]);
  }
  std::size_t slot = home(key);
  while (values_[slot] != npos) slot = (slot + 1) & mask_;
  keys_[slot] = key;
  values_[slot] = value;
  ++size_;
}

void PointIndex::clear() {
  // keep the capacity; searches reuse one index across replicates
  std::fill(values_.begin(), values_.end(), npos);
  size_ = 0;
}

}  // namespace fpp
