#pragma once

#include <cstdint>
#include <stdexcept>

#include "tmfg/fourier.hpp"

namespace tmfg {

// Uniform periodic lattice on T^d, d in {1,2}. h*n = 1 in index arithmetic:
// all wraparound is done on integer indices, never on floats.
struct TorusGrid {
  int dim = 1;
  int n = 0;
  double h = 0.0;

  TorusGrid() = default;
  TorusGrid(int dim_, int n_) : dim(dim_), n(n_), h(1.0 / n_) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("TorusGrid: dim must be 1 or 2");
    if (n < 2) throw std::invalid_argument("TorusGrid: n must be >= 2");
  }

  std::int64_t num_nodes() const {
    return dim == 1 ? n : static_cast<std::int64_t>(n) * n;
  }

  // Node index <-> integer coordinates (x-fastest for d=2).
  std::array<int, 2> coords(std::int64_t idx) const {
    if (dim == 1) return {static_cast<int>(idx), 0};
    return {static_cast<int>(idx % n), static_cast<int>(idx / n)};
  }

  std::int64_t index(int i0, int i1 = 0) const {
    i0 = wrap(i0);
    i1 = wrap(i1);
    return dim == 1 ? i0 : i0 + static_cast<std::int64_t>(n) * i1;
  }

  int wrap(int i) const {
    i %= n;
    return i < 0 ? i + n : i;
  }

  Vec node(std::int64_t idx) const {
    const auto c = coords(idx);
    return {c[0] * h, dim == 2 ? c[1] * h : 0.0};
  }

  // Representative of the integer difference in [-n/2, n/2): the half-open
  // convention maps the antipodal offset n/2 to -n/2.
  int wrap_diff(int d) const {
    d %= n;
    if (d < 0) d += n;
    if (2 * d >= n) d -= n;
    return d;
  }

  bool operator==(const TorusGrid& o) const { return dim == o.dim && n == o.n; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

// Representative of y - x in [-1/2, 1/2)^dim, componentwise.
inline Vec torus_displacement(std::int64_t x, std::int64_t y, const TorusGrid& grid) {
  if (x < 0 || x >= grid.num_nodes() || y < 0 || y >= grid.num_nodes())
    throw std::out_of_range("torus_displacement: node index out of range");
  const auto cx = grid.coords(x);
  const auto cy = grid.coords(y);
  Vec d{0.0, 0.0};
  for (int a = 0; a < grid.dim; ++a) d[a] = grid.wrap_diff(cy[a] - cx[a]) * grid.h;
  return d;
}

// Geodesic distance on the torus under the Euclidean metric of the cube.
inline double torus_distance(std::int64_t x, std::int64_t y, const TorusGrid& grid) {
  return norm2(torus_displacement(x, y, grid));
}

}  // namespace tmfg
