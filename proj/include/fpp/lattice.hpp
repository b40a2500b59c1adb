#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fpp {

using Coord = std::int32_t;

/// A vertex of Z^d. The dimension is the length of the coordinate list; d >= 2.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> coords);
  LatticePoint(std::initializer_list<Coord> coords);

  static LatticePoint origin(int dim);
  /// The unit vector e_axis (0-based axis).
  static LatticePoint unit(int dim, int axis);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  Coord operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
  std::span<const Coord> coords() const noexcept { return coords_; }

  /// p + delta * e_axis.
  LatticePoint shifted(int axis, Coord delta) const;

  std::string to_string() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<Coord> coords_;
};

/// The nearest-neighbour edge {base, base + e_axis}.
struct EdgeId {
  LatticePoint base;
  int axis = 0;

  friend bool operator==(const EdgeId&, const EdgeId&) = default;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

/// Index n of the hyperplane H_n = {x : x_1 = n}.
struct HyperplaneIndex {
  std::int64_t n = 0;
  friend auto operator<=>(const HyperplaneIndex&, const HyperplaneIndex&) = default;
};

/// The 2d nearest neighbours in the order axis 0 +, axis 0 -, axis 1 +, ...
std::vector<LatticePoint> neighbors(const LatticePoint& p);

/// Canonical id of the edge {p, q}; the base is the endpoint with the smaller
/// coordinate on the differing axis. Throws NotAdjacent unless |p - q|_1 = 1.
EdgeId canonical_edge(const LatticePoint& p, const LatticePoint& q);

HyperplaneIndex hyperplane_index(const LatticePoint& p);

// ---------------------------------------------------------------------------
// Stable hashing.
//
// A point is keyed by   key(p) = d * kDimensionSalt + sum_{k : p_k != 0} z(k, p_k)
// (wrapping 64-bit arithmetic), where z(k, c) = mix64(kCoordSalt ^ (k << 32) ^ u32(c)).
// The key depends only on (d, coordinates in order), never on memory layout or
// platform, and a single-coordinate move updates it in O(1).
// An edge is keyed by   edge_key(e) = mix64(key(base) ^ mix64(kAxisSalt + axis)).
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer (Steele, Lea and Flood; constants from Stafford's Mix13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kDimensionSalt = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kCoordSalt = 0xD1B54A32D192ED03ULL;
inline constexpr std::uint64_t kAxisSalt = 0x8CB92BA72F3D8DD7ULL;

constexpr std::uint64_t coord_term(int axis, Coord c) noexcept {
  if (c == 0) return 0;
  return mix64(kCoordSalt ^ (static_cast<std::uint64_t>(axis) << 32) ^
               static_cast<std::uint32_t>(c));
}

std::uint64_t point_key(std::span<const Coord> coords) noexcept;
inline std::uint64_t point_key(const LatticePoint& p) noexcept { return point_key(p.coords()); }

/// Key of p + delta * e_axis given key(p) and p_axis.
constexpr std::uint64_t step_key(std::uint64_t key, int axis, Coord from, Coord delta) noexcept {
  return key - coord_term(axis, from) + coord_term(axis, from + delta);
}

constexpr std::uint64_t edge_key_from_base(std::uint64_t base_key, int axis) noexcept {
  return mix64(base_key ^ mix64(kAxisSalt + static_cast<std::uint64_t>(axis)));
}

inline std::uint64_t edge_key(const EdgeId& e) noexcept {
  return edge_key_from_base(point_key(e.base), e.axis);
}

// ---------------------------------------------------------------------------
// Flat storage for many points of one dimension, with an open-addressing index.
// ---------------------------------------------------------------------------

class PointPool {
 public:
  explicit PointPool(int dim) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return keys_.size(); }

  std::uint32_t push(std::span<const Coord> coords, std::uint64_t key);
  /// Appends base + delta * e_axis.
  std::uint32_t push_shifted(std::uint32_t base, int axis, Coord delta, std::uint64_t key);

  std::span<const Coord> at(std::uint32_t i) const noexcept {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::uint64_t key(std::uint32_t i) const noexcept { return keys_[i]; }
  LatticePoint point(std::uint32_t i) const;

  /// True when point i equals base + delta * e_axis.
  bool equals_shifted(std::uint32_t i, std::uint32_t base, int axis, Coord delta) const noexcept;
  bool equals(std::uint32_t i, std::span<const Coord> coords) const noexcept;

  void clear() noexcept {
    coords_.clear();
    keys_.clear();
  }

 private:
  int dim_;
  std::vector<Coord> coords_;
  std::vector<std::uint64_t> keys_;
};

/// Multimap from 64-bit keys to pool indices. Key collisions are resolved by the
/// caller's identity predicate, so distinct points never alias.
class PointIndex {
 public:
  static constexpr std::uint32_t npos = 0xFFFFFFFFu;

  PointIndex() { reset(16); }

  template <class Same>
  std::uint32_t find(std::uint64_t key, Same&& same) const {
    for (std::size_t slot = home(key);; slot = (slot + 1) & mask_) {
      const std::uint32_t v = values_[slot];
      if (v == npos) return npos;
      if (keys_[slot] == key && same(v)) return v;
    }
  }

  /// Calls fn(value) for every entry stored under `key`.
  template <class Fn>
  void for_each(std::uint64_t key, Fn&& fn) const {
    for (std::size_t slot = home(key);; slot = (slot + 1) & mask_) {
      const std::uint32_t v = values_[slot];
      if (v == npos) return;
      if (keys_[slot] == key) fn(v);
    }
  }

  void insert(std::uint64_t key, std::uint32_t value);
  void clear();
  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t home(std::uint64_t key) const noexcept {
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> shift_);
  }
  void reset(std::size_t capacity);

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> values_;
  std::size_t mask_ = 0;
  int shift_ = 0;
  std::size_t size_ = 0;
};

}  // namespace fpp
