#include "tmfg/weakkam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tmfg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::pair<std::vector<double>, std::vector<std::int64_t>> lax_oleinik_apply(
    const std::vector<double>& phi, const ActionTable& table) {
  const EdgeSet& es = *table.edges;
  const std::int64_t N = es.grid.num_nodes();
  if (static_cast<std::int64_t>(phi.size()) != N)
    throw std::invalid_argument("lax_oleinik_apply: potential size mismatch");
  std::vector<double> out(N);
  std::vector<std::int64_t> arg(N);
#pragma omp parallel for schedule(static)
  for (std::int64_t y = 0; y < N; ++y) {
    double best = kInf;
    std::int64_t best_e = -1;
    // Sources are ascending, so strict < breaks ties toward the smallest.
    for (std::int64_t e = es.tgt_begin[y]; e < es.tgt_begin[y + 1]; ++e) {
      const double c = phi[es.src[e]] + table.cost[e];
      if (c < best) {
        best = c;
        best_e = e;
      }
    }
    out[y] = best;
    arg[y] = best_e;
  }
  return {std::move(out), std::move(arg)};
}

std::pair<double, std::vector<std::int64_t>> effective_constant_karp(const ActionTable& table) {
  const EdgeSet& es = *table.edges;
  const std::int64_t N = es.grid.num_nodes();
  const std::int64_t stride = N;

  // dp[k*stride + v]: min cost of a walk with exactly k edges from node 0.
  std::vector<double> dp(static_cast<std::size_t>(N + 1) * stride, kInf);
  std::vector<std::int32_t> par(static_cast<std::size_t>(N + 1) * stride, -1);
  dp[0] = 0.0;  // node 0 at level 0

  for (std::int64_t k = 1; k <= N; ++k) {
    const double* prev = dp.data() + (k - 1) * stride;
    double* cur = dp.data() + k * stride;
    std::int32_t* pc = par.data() + k * stride;
#pragma omp parallel for schedule(static)
    for (std::int64_t y = 0; y < N; ++y) {
      double best = kInf;
      std::int32_t best_src = -1;
      for (std::int64_t e = es.tgt_begin[y]; e < es.tgt_begin[y + 1]; ++e) {
        const double p = prev[es.src[e]];
        if (p == kInf) continue;
        const double c = p + table.cost[e];
        if (c < best) {
          best = c;
          best_src = es.src[e];
        }
      }
      cur[y] = best;
      pc[y] = best_src;
    }
  }

  // abar = min_v max_k (dp[N][v] - dp[k][v]) / (N - k).
  double abar = kInf;
  std::int64_t v_star = -1;
  const double* last = dp.data() + N * stride;
  for (std::int64_t v = 0; v < N; ++v) {
    if (last[v] == kInf) continue;
    double worst = -kInf;
    for (std::int64_t k = 0; k < N; ++k) {
      const double dk = dp[k * stride + v];
      if (dk == kInf) continue;
      worst = std::max(worst, (last[v] - dk) / static_cast<double>(N - k));
    }
    if (worst < abar) {
      abar = worst;
      v_star = v;
    }
  }
  if (v_star < 0) throw std::runtime_error("effective_constant_karp: graph not connected");

  // Walk the parent chain of the critical vertex; every cycle on it has mean
  // >= abar and at least one attains it.
  std::vector<std::int64_t> walk(N + 1);
  walk[N] = v_star;
  for (std::int64_t k = N; k > 0; --k) walk[k - 1] = par[k * stride + walk[k]];

  std::vector<std::int64_t> best_cycle;
  double best_gap = kInf;
  std::vector<std::int64_t> stack;
  std::vector<std::int64_t> pos(N, -1);
  for (std::int64_t k = 0; k <= N; ++k) {
    const std::int64_t v = walk[k];
    if (pos[v] >= 0) {
      std::vector<std::int64_t> cycle(stack.begin() + pos[v], stack.end());
      cycle.push_back(v);  // closed
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
        const std::int64_t e = es.find_edge(cycle[i], cycle[i + 1]);
        sum += table.cost[e];
      }
      const std::size_t len = cycle.size() - 1;
      const double gap = std::abs(sum / len - abar);
      const std::int64_t head = *std::min_element(cycle.begin(), cycle.end() - 1);
      const std::int64_t best_head =
          best_cycle.empty() ? -1 : *std::min_element(best_cycle.begin(), best_cycle.end() - 1);
      const bool better =
          best_cycle.empty() || gap < best_gap - 1e-12 ||
          (gap <= best_gap + 1e-12 &&
           (head < best_head ||
            (head == best_head && cycle.size() < best_cycle.size())));
      if (better) {
        best_gap = gap;
        best_cycle = cycle;
      }
      // Pop the cycle and continue scanning the walk.
      const std::int64_t depth = pos[v];
      while (static_cast<std::int64_t>(stack.size()) > depth) {
        pos[stack.back()] = -1;
        stack.pop_back();
      }
    }
    pos[v] = static_cast<std::int64_t>(stack.size());
    stack.push_back(v);
  }
  if (best_cycle.empty())
    throw std::runtime_error("effective_constant_karp: no cycle on critical walk");
  if (best_gap > 1e-7)
    throw std::runtime_error("effective_constant_karp: recovered cycle mean off abar");

  // Canonical orientation: start the closed list at the smallest node.
  best_cycle.pop_back();
  const auto head_it = std::min_element(best_cycle.begin(), best_cycle.end());
  std::rotate(best_cycle.begin(), head_it, best_cycle.end());
  best_cycle.push_back(best_cycle.front());
  return {abar, std::move(best_cycle)};
}

WeakKamSolution solve_weak_kam(const ActionTable& table, const SolverConfig& cfg) {
  const EdgeSet& es = *table.edges;
  const std::int64_t N = es.grid.num_nodes();

  WeakKamSolution sol;
  auto [abar, cycle] = effective_constant_karp(table);
  sol.abar = abar;
  sol.lbar = abar / table.tau;
  sol.critical_cycle = cycle;

  // Min-plus eigenvector: shortest reduced-cost walk distances from the
  // critical cycle, by Jacobi-relaxed Bellman sweeps.
  std::vector<double> dist(N, kInf), next(N);
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) dist[cycle[i]] = 0.0;
  const double tol = 1e-14;
  bool changed = true;
  for (std::int64_t round = 0; round < N + 2 && changed; ++round) {
    changed = false;
#pragma omp parallel for schedule(static)
    for (std::int64_t y = 0; y < N; ++y) {
      double best = dist[y];
      for (std::int64_t e = es.tgt_begin[y]; e < es.tgt_begin[y + 1]; ++e) {
        const double d = dist[es.src[e]];
        if (d == kInf) continue;
        best = std::min(best, d + table.cost[e] - abar);
      }
      next[y] = best;
    }
    for (std::int64_t y = 0; y < N; ++y)
      if (next[y] < dist[y] - tol) changed = true;
    dist.swap(next);
  }

  const double shift = dist[cfg.anchor_node];
  if (!(shift < kInf))
    throw std::runtime_error("solve_weak_kam: anchor unreachable from critical cycle");
  sol.u.resize(N);
  for (std::int64_t y = 0; y < N; ++y) sol.u[y] = dist[y] - shift;

  auto [tu, arg] = lax_oleinik_apply(sol.u, table);
  double viol = 0.0;
  for (std::int64_t y = 0; y < N; ++y)
    viol = std::max(viol, std::abs(tu[y] - sol.u[y] - abar));
  if (viol > 1e-8)
    throw std::runtime_error("solve_weak_kam: fixed-point identity violated: " +
                             std::to_string(viol));
  sol.argmin_edge = std::move(arg);
  for (std::int64_t y = 0; y < N && !sol.window_boundary_hit; ++y)
    if (es.near_boundary(sol.argmin_edge[y])) sol.window_boundary_hit = true;
  return sol;
}

double verify_subaction(const WeakKamSolution& sol, const ActionTable& table) {
  const EdgeSet& es = *table.edges;
  double worst = -kInf;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::int64_t e = 0; e < es.num_edges(); ++e)
    worst = std::max(worst,
                     sol.abar - table.cost[e] - sol.u[es.src[e]] + sol.u[es.tgt[e]]);
  return worst;
}

std::vector<std::int64_t> extract_N_tau(const WeakKamSolution& sol, const ActionTable& table,
                                        double tol) {
  const EdgeSet& es = *table.edges;
  std::vector<std::int64_t> out;
  for (std::int64_t e = 0; e < es.num_edges(); ++e) {
    const double gap =
        table.cost[e] - sol.abar + sol.u[es.src[e]] - sol.u[es.tgt[e]];
    if (std::abs(gap) <= tol) out.push_back(e);
  }
  if (out.empty())
    throw std::runtime_error("extract_N_tau: contact set empty");
  return out;
}

}  // namespace tmfg
