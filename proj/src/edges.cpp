#include "tmfg/edges.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tmfg {

namespace {
constexpr double kEps = 1e-12;

// Integer displacement candidates along one axis, ascending. The window is
// half-open at its boundary, matching the displacement representative
// convention: offsets with k*h in [-radius, radius). Covers the whole axis
// (half-open reps) when the window saturates it.
std::vector<int> axis_offsets(int n, double radius_over_h) {
  std::vector<int> out;
  const int lo_full = -(n / 2);
  const int hi_full = lo_full + n - 1;
  const int lo = std::max(-static_cast<int>(std::floor(radius_over_h + kEps)), lo_full);
  const int hi =
      std::min(static_cast<int>(std::ceil(radius_over_h - kEps)) - 1, hi_full);
  out.reserve(hi - lo + 1);
  for (int d = lo; d <= hi; ++d) out.push_back(d);
  return out;
}
}  // namespace

std::int64_t EdgeSet::find_edge(std::int64_t source, std::int64_t target) const {
  const auto lo = src.begin() + tgt_begin[target];
  const auto hi = src.begin() + tgt_begin[target + 1];
  const auto it = std::lower_bound(lo, hi, static_cast<std::int32_t>(source));
  if (it == hi || *it != source) return -1;
  return it - src.begin();
}

bool EdgeSet::has_boundary() const {
  const double max_disp = 0.5 * std::sqrt(static_cast<double>(grid.dim));
  return tau * window_d < max_disp - kEps;
}

bool EdgeSet::near_boundary(std::int64_t edge) const {
  if (!has_boundary()) return false;
  const double r = tau * norm2(vel[edge]);
  return tau * window_d - r < grid.h;
}

std::shared_ptr<const EdgeSet> build_edge_set(const TorusGrid& grid, const SolverConfig& cfg) {
  cfg.validate();
  const double radius = cfg.tau * cfg.window_d;
  if (radius < 2.0 * grid.h - kEps) {
    std::ostringstream msg;
    msg << "build_edge_set: window too small: tau*window_d = " << radius << " < 2h = "
        << 2.0 * grid.h << "; need window_d >= " << 2.0 * grid.h / cfg.tau
        << " at tau = " << cfg.tau;
    throw std::invalid_argument(msg.str());
  }

  auto es = std::make_shared<EdgeSet>();
  es->grid = grid;
  es->tau = cfg.tau;
  es->window_d = cfg.window_d;

  const auto offs0 = axis_offsets(grid.n, radius / grid.h);
  const auto offs1 = grid.dim == 2 ? offs0 : std::vector<int>{0};

  // Admissible displacement vectors, filtered by the Euclidean window.
  std::vector<std::array<int, 2>> deltas;
  for (int d1 : offs1)
    for (int d0 : offs0) {
      const double dx = d0 * grid.h, dy = d1 * grid.h;
      if (dx * dx + dy * dy <= radius * radius + kEps) deltas.push_back({d0, d1});
    }

  const std::int64_t N = grid.num_nodes();
  es->tgt_begin.assign(N + 1, 0);
  es->src.reserve(N * deltas.size());
  es->tgt.reserve(N * deltas.size());
  es->vel.reserve(N * deltas.size());

  std::vector<std::pair<std::int64_t, std::array<int, 2>>> sources;
  for (std::int64_t t = 0; t < N; ++t) {
    const auto ct = grid.coords(t);
    sources.clear();
    for (const auto& d : deltas) {
      // source = target - delta so that torus_displacement(src, tgt) = delta*h
      const std::int64_t s = grid.index(ct[0] - d[0], ct[1] - d[1]);
      sources.push_back({s, d});
    }
    std::sort(sources.begin(), sources.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [s, d] : sources) {
      es->src.push_back(static_cast<std::int32_t>(s));
      es->tgt.push_back(static_cast<std::int32_t>(t));
      es->vel.push_back(Vec{d[0] * grid.h / cfg.tau, d[1] * grid.h / cfg.tau});
    }
    es->tgt_begin[t + 1] = static_cast<std::int64_t>(es->src.size());
  }
  return es;
}

}  // namespace tmfg
