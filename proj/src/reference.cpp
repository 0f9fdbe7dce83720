#include "tmfg/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tmfg::ref {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> action_costs_serial(const EdgeSet& edges, const LagrangianSpec& lag,
                                        const CouplingSpec& cpl, const GridMeasure& m,
                                        double tau) {
  if (m.grid != edges.grid)
    throw std::invalid_argument("action_costs_serial: measure grid mismatch");
  const std::int64_t E = edges.num_edges();
  const std::int64_t N = edges.grid.num_nodes();
  std::vector<double> f_cache(N);
  for (std::int64_t i = 0; i < N; ++i)
    f_cache[i] = cpl.family == CouplingSpec::Family::Zero ? 0.0 : cpl.eval(edges.grid.node(i), m);
  std::vector<double> cost(E);
  for (std::int64_t e = 0; e < E; ++e) {
    const std::int64_t s = edges.src[e];
    cost[e] = tau * (lag.lagrangian(edges.grid.node(s), edges.vel[e]) + f_cache[s]);
  }
  return cost;
}

std::vector<double> lax_oleinik_apply_serial(const std::vector<double>& phi,
                                             const ActionTable& table) {
  const EdgeSet& es = *table.edges;
  const std::int64_t N = es.grid.num_nodes();
  if (static_cast<std::int64_t>(phi.size()) != N)
    throw std::invalid_argument("lax_oleinik_apply_serial: potential size mismatch");
  std::vector<double> out(N);
  for (std::int64_t y = 0; y < N; ++y) {
    double best = kInf;
    for (std::int64_t e = es.tgt_begin[y]; e < es.tgt_begin[y + 1]; ++e)
      best = std::min(best, phi[es.src[e]] + table.cost[e]);
    out[y] = best;
  }
  return out;
}

double karp_min_mean_serial(const ActionTable& table) {
  const EdgeSet& es = *table.edges;
  const std::int64_t N = es.grid.num_nodes();
  std::vector<double> dp(static_cast<std::size_t>(N + 1) * N, kInf);
  dp[0] = 0.0;
  for (std::int64_t k = 1; k <= N; ++k) {
    const double* prev = dp.data() + (k - 1) * N;
    double* cur = dp.data() + k * N;
    for (std::int64_t y = 0; y < N; ++y) {
      double best = kInf;
      for (std::int64_t e = es.tgt_begin[y]; e < es.tgt_begin[y + 1]; ++e) {
        const double p = prev[es.src[e]];
        if (p == kInf) continue;
        best = std::min(best, p + table.cost[e]);
      }
      cur[y] = best;
    }
  }
  double abar = kInf;
  const double* last = dp.data() + N * N;
  for (std::int64_t v = 0; v < N; ++v) {
    if (last[v] == kInf) continue;
    double worst = -kInf;
    for (std::int64_t k = 0; k < N; ++k) {
      const double dk = dp[k * N + v];
      if (dk == kInf) continue;
      worst = std::max(worst, (last[v] - dk) / static_cast<double>(N - k));
    }
    abar = std::min(abar, worst);
  }
  if (abar == kInf) throw std::runtime_error("karp_min_mean_serial: graph not connected");
  return abar;
}

}  // namespace tmfg::ref
