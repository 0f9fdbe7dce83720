#include "tmfg/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tmfg {

namespace {

double circle_w1(const GridMeasure& m1, const GridMeasure& m2) {
  const int n = m1.grid.n;
  const double h = m1.grid.h;
  // CDF difference, piecewise constant on [x_i, x_{i+1}).
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += m1.w[i] - m2.w[i];
    cdf[i] = acc;
  }
  // min_a sum |cdf_i - a| * h is attained at a median of the cdf values.
  std::vector<double> sorted = cdf;
  std::sort(sorted.begin(), sorted.end());
  const double a = sorted[n / 2];
  double cost = 0.0;
  for (double c : cdf) cost += std::abs(c - a);
  return cost * h;
}

// Min-cost flow on the torus grid graph, successive shortest paths with
// potentials. Each undirected grid edge becomes a pair of directed arcs of
// cost h with explicit residual capacities, so cancelling flow is bounded by
// the amount actually present.
class GridFlow {
 public:
  explicit GridFlow(const TorusGrid& g) : grid_(g), n_(g.num_nodes()) {
    adj_.resize(n_);
    const double h = grid_.h;
    for (std::int64_t i = 0; i < n_; ++i) {
      const auto c = grid_.coords(i);
      add_arc_pair(i, grid_.index(c[0] + 1, c[1]), h);
      if (grid_.dim == 2) add_arc_pair(i, grid_.index(c[0], c[1] + 1), h);
    }
    pot_.assign(n_, 0.0);
  }

  double solve(std::vector<double> b) {
    double total = 0.0;
    const double tol = 1e-15;
    while (true) {
      std::int64_t s = -1;
      for (std::int64_t i = 0; i < n_; ++i)
        if (b[i] > tol) {
          s = i;
          break;
        }
      if (s < 0) break;

      dijkstra(s);

      // Nearest deficit node, smallest index on ties.
      std::int64_t t = -1;
      for (std::int64_t i = 0; i < n_; ++i) {
        if (b[i] < -tol && dist_[i] < kInf &&
            (t < 0 || dist_[i] < dist_[t] - 1e-15)) t = i;
      }
      if (t < 0) throw std::runtime_error("wasserstein1: no reachable deficit node");

      double delta = std::min(b[s], -b[t]);
      for (std::int64_t v = t; v != s; v = from_[parent_[v]])
        delta = std::min(delta, cap_[parent_[v]]);
      for (std::int64_t v = t; v != s; v = from_[parent_[v]]) {
        const std::size_t a = parent_[v];
        cap_[a] -= delta;
        cap_[a ^ 1] += delta;
        total += delta * cost_[a];
      }
      b[s] -= delta;
      b[t] += delta;
      for (std::int64_t i = 0; i < n_; ++i)
        if (dist_[i] < kInf) pot_[i] += dist_[i];
    }
    return total;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  // Directed arc u->v plus its zero-capacity reverse at index^1.
  void add_arc(std::int64_t u, std::int64_t v, double cost, double cap) {
    adj_[u].push_back(from_.size());
    from_.push_back(u);
    to_.push_back(v);
    cost_.push_back(cost);
    cap_.push_back(cap);
    adj_[v].push_back(from_.size());
    from_.push_back(v);
    to_.push_back(u);
    cost_.push_back(-cost);
    cap_.push_back(0.0);
  }

  void add_arc_pair(std::int64_t u, std::int64_t v, double h) {
    add_arc(u, v, h, kInf);
    add_arc(v, u, h, kInf);
  }

  void dijkstra(std::int64_t s) {
    dist_.assign(n_, kInf);
    parent_.assign(n_, 0);
    using Item = std::pair<double, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist_[s] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > dist_[u] + 1e-18) continue;
      for (const std::size_t a : adj_[u]) {
        if (from_[a] != u || cap_[a] <= 1e-18) continue;
        const std::int64_t v = to_[a];
        // Reduced cost; exactly zero along previous shortest paths, clamp
        // only shields against rounding.
        const double rc = std::max(cost_[a] + pot_[u] - pot_[v], 0.0);
        const double nd = d + rc;
        if (nd < dist_[v] - 1e-18) {
          dist_[v] = nd;
          parent_[v] = a;
          pq.push({nd, v});
        }
      }
    }
  }

  TorusGrid grid_;
  std::int64_t n_;
  std::vector<std::int64_t> from_, to_;
  std::vector<double> cost_, cap_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<double> pot_, dist_;
  std::vector<std::size_t> parent_;
};

}  // namespace

double wasserstein1(const GridMeasure& m1, const GridMeasure& m2) {
  if (m1.grid != m2.grid)
    throw std::invalid_argument("wasserstein1: measures live on different grids");
  if (m1.grid.dim == 1) return circle_w1(m1, m2);
  std::vector<double> b(m1.grid.num_nodes());
  for (std::int64_t i = 0; i < m1.grid.num_nodes(); ++i) b[i] = m1.w[i] - m2.w[i];
  GridFlow flow(m1.grid);
  return flow.solve(std::move(b));
}

}  // namespace tmfg
