#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of them share code paths with the library beyond the weight field.

#include <cmath>
#include <limits>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace oracle {

inline constexpr double kWall = 1e9;

/// Weight field with every edge that leaves the in-plane box |x_2|, |x_3| <= r
/// replaced by kWall, so searches on the infinite lattice see the truncated graph.
inline fpp::WeightField walled(fpp::WeightField inner, int r) {
  return [inner = std::move(inner), r](const fpp::EdgeId& e) {
    const auto& b = e.base;
    for (int k = 1; k < b.dim(); ++k) {
      const int top = b[k] + (e.axis == k ? 1 : 0);
      if (std::abs(b[k]) > r || std::abs(top) > r) return kWall;
    }
    return inner(e);
  };
}

/// Bellman-Ford relaxation over the square [-r, r]^2 inside H_0 of Z^3 from the
/// origin, followed by the cheapest +e_1 exit.
inline double slab_bellman_ford(const fpp::WeightField& field, int r) {
  const int side = 2 * r + 1;
  auto id = [&](int y, int z) { return (y + r) * side + (z + r); };
  std::vector<double> dist(static_cast<std::size_t>(side * side), std::numeric_limits<double>::infinity());
  dist[static_cast<std::size_t>(id(0, 0))] = 0.0;

  struct Arc {
    int u, v;
    double w;
  };
  std::vector<Arc> arcs;
  for (int y = -r; y <= r; ++y) {
    for (int z = -r; z <= r; ++z) {
      if (y < r) {
        const double w = field(fpp::EdgeId{fpp::LatticePoint({0, y, z}), 1});
        arcs.push_back({id(y, z), id(y + 1, z), w});
        arcs.push_back({id(y + 1, z), id(y, z), w});
      }
      if (z < r) {
        const double w = field(fpp::EdgeId{fpp::LatticePoint({0, y, z}), 2});
        arcs.push_back({id(y, z), id(y, z + 1), w});
        arcs.push_back({id(y, z + 1), id(y, z), w});
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : arcs) {
      if (dist[static_cast<std::size_t>(a.u)] + a.w < dist[static_cast<std::size_t>(a.v)]) {
        dist[static_cast<std::size_t>(a.v)] = dist[static_cast<std::size_t>(a.u)] + a.w;
        changed = true;
      }
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (int y = -r; y <= r; ++y)
    for (int z = -r; z <= r; ++z)
      best = std::min(best, dist[static_cast<std::size_t>(id(y, z))] +
                                field(fpp::EdgeId{fpp::LatticePoint({0, y, z}), 0}));
  return best;
}

// ---------------------------------------------------------------------------
// Integral pieces by Fubini. With s_x = 2(d-1) x^{(d-2)/(d-1)},
//   int 1/s_x dx = x^{1/(d-1)} / 2 =: Q(x),
// so each double integral collapses to a single one over y, evaluated here with
// composite Simpson on a log-spaced grid (no shared quadrature code).

struct Series {
  double d;
  double s(double x) const { return 2.0 * (d - 1.0) * std::pow(x, (d - 2.0) / (d - 1.0)); }
  double Q(double x) const { return 0.5 * std::pow(x, 1.0 / (d - 1.0)); }
  double g(double y) const { return std::pow(1.0 - 1.0 / (2.0 * d), y - 1.0) / s(y); }
};

template <class F>
double simpson(F&& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
  return acc * h / 3.0;
}

/// int_lo^hi f, split into geometrically growing pieces for long ranges.
template <class F>
double integrate(F&& f, double lo, double hi) {
  double total = 0.0;
  double a = lo;
  while (a < hi) {
    const double b = std::min(hi, a + std::max(1.0, a));
    total += simpson(f, a, b, 2000);
    a = b;
  }
  return total;
}

/// (I) = 2 int_2^{2d+1} (1/s_x) int_{x-1}^{2d} g = 2 int_1^{2d} g(y) (Q(y+1) - Q(2)) dy.
inline double part_I(double d) {
  const Series t{d};
  return 2.0 * integrate([&](double y) { return t.g(y) * (t.Q(y + 1.0) - t.Q(2.0)); }, 1.0, 2.0 * d);
}

/// (II) = 2 (Q(2d+1) - Q(2)) int_{2d}^inf g.
inline double part_II(double d) {
  const Series t{d};
  const double tail = integrate([&](double y) { return t.g(y); }, 2.0 * d, 2.0 * d + 90.0 * 2.0 * d);
  return 2.0 * (t.Q(2.0 * d + 1.0) - t.Q(2.0)) * tail;
}

/// (III) = 2 int_{2d}^inf g(y) (Q(y+1) - Q(2d+1)) dy.
inline double part_III(double d) {
  const Series t{d};
  return 2.0 * integrate([&](double y) { return t.g(y) * (t.Q(y + 1.0) - t.Q(2.0 * d + 1.0)); }, 2.0 * d,
                         2.0 * d + 90.0 * 2.0 * d);
}

/// Direct partial sums of the first-moment series at rate 1 (plain loop, no tail).
inline double first_moment_partial(int d, long terms) {
  const double A = 1.0 - 1.0 / (2.0 * d);
  const Series t{static_cast<double>(d)};
  long double sum = 1.0L / (1.0L + t.s(1.0));
  long double p = 1.0L;
  for (long n = 2; n <= terms; ++n) {
    p *= A;
    sum += p / t.s(static_cast<double>(n));
  }
  return static_cast<double>(sum);
}

}  // namespace oracle
