#include "tmfg/action.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tmfg {

namespace {
constexpr double kEps = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ActionTable build_action_table(std::shared_ptr<const EdgeSet> edges, const LagrangianSpec& lag,
                               const CouplingSpec& cpl, const GridMeasure& m, double tau) {
  if (m.grid != edges->grid)
    throw std::invalid_argument("build_action_table: measure grid mismatch");
  ActionTable t;
  t.edges = edges;
  t.tau = tau;
  const std::int64_t E = edges->num_edges();
  t.cost.resize(E);
  const std::vector<double> f_cache = cpl.eval_all(edges->grid, m);
#pragma omp parallel for schedule(static)
  for (std::int64_t e = 0; e < E; ++e) {
    const std::int64_t s = edges->src[e];
    const Vec x = edges->grid.node(s);
    t.cost[e] = tau * (lag.lagrangian(x, edges->vel[e]) + f_cache[s]);
  }
  return t;
}

namespace {

// Composed-action DP on a k-times refined lattice. Positions are lifted
// offsets from the source node; all field evaluations are periodic, so no
// wrapping is needed on the lift.
struct RefinedDp {
  const TorusGrid& grid;
  const LagrangianSpec& lag;
  const CouplingSpec& cpl;
  const GridMeasure& m;
  double tau;
  int k;
  double window_d;

  double hf, tauf;
  int nf, rf, K, W;
  std::vector<std::array<int, 2>> deltas;

  RefinedDp(const TorusGrid& g, const LagrangianSpec& l, const CouplingSpec& c,
            const GridMeasure& mm, double tau_, int k_, double D)
      : grid(g), lag(l), cpl(c), m(mm), tau(tau_), k(k_), window_d(D) {
    if (k < 1 || (k & (k - 1)) != 0)
      throw std::invalid_argument("refined_action: k must be a power of two");
    hf = grid.h / k;
    tauf = tau / k;
    nf = grid.n * k;
    rf = static_cast<int>(std::floor(tau * window_d / grid.h + kEps));
    if (rf < 1) throw std::invalid_argument("refined_action: window below grid resolution");
    K = std::min(static_cast<std::int64_t>(k) * rf, static_cast<std::int64_t>(nf) / 2);
    W = 2 * K + 1;

    const double step_r = tauf * window_d;
    for (int d1 = (grid.dim == 2 ? -rf : 0); d1 <= (grid.dim == 2 ? rf : 0); ++d1)
      for (int d0 = -rf; d0 <= rf; ++d0) {
        const double dx = d0 * hf, dy = d1 * hf;
        if (dx * dx + dy * dy <= step_r * step_r + kEps) deltas.push_back({d0, d1});
      }
  }

  std::int64_t num_states() const {
    return grid.dim == 1 ? W : static_cast<std::int64_t>(W) * W;
  }

  std::int64_t state_index(int o0, int o1) const {
    return grid.dim == 1 ? (o0 + K) : (o0 + K) + static_cast<std::int64_t>(W) * (o1 + K);
  }

  Vec position(const Vec& x0, int o0, int o1) const {
    return {x0[0] + o0 * hf, x0[1] + o1 * hf};
  }

  // Runs the k-step DP from coarse node x. If target_off is non-null, states
  // are pruned to those that can still reach it. Returns the final level.
  std::vector<double> run(std::int64_t x, const std::array<int, 2>* target_off) const {
    const Vec x0 = grid.node(x);
    const std::int64_t S = num_states();

    // Per-state field caches.
    std::vector<double> f_st(S), v_st;
    std::vector<Vec> b_st;
    const bool mech = lag.family == LagrangianSpec::Family::Mechanical;
    if (mech) v_st.resize(S);
    else b_st.resize(S);
    const int o1_lo = grid.dim == 2 ? -K : 0, o1_hi = grid.dim == 2 ? K : 0;
#pragma omp parallel for schedule(static) collapse(2)
    for (int o1 = o1_lo; o1 <= o1_hi; ++o1)
      for (int o0 = -K; o0 <= K; ++o0) {
        const Vec p = position(x0, o0, o1);
        const std::int64_t s = state_index(o0, o1);
        f_st[s] = cpl.family == CouplingSpec::Family::Zero ? 0.0 : cpl.eval(p, m);
        if (mech) v_st[s] = lag.potential.eval(p);
        else b_st[s] = lag.drift_at(p);
      }

    std::vector<double> kinetic(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const Vec v{deltas[i][0] * hf / tauf, deltas[i][1] * hf / tauf};
      kinetic[i] = tauf * 0.5 * dot(v, v);
    }

    std::vector<double> cur(S, kInf), nxt(S, kInf);
    cur[state_index(0, 0)] = 0.0;

    for (int j = 1; j <= k; ++j) {
      const std::int64_t reach = std::min<std::int64_t>(static_cast<std::int64_t>(j) * rf, K);
#pragma omp parallel for schedule(static) collapse(2)
      for (int o1 = o1_lo; o1 <= o1_hi; ++o1)
        for (int o0 = -K; o0 <= K; ++o0) {
          const std::int64_t s = state_index(o0, o1);
          double best = kInf;
          if (std::abs(o0) <= reach && std::abs(o1) <= reach &&
              (!target_off ||
               (std::abs(o0 - (*target_off)[0]) <= static_cast<std::int64_t>(k - j) * rf &&
                std::abs(o1 - (*target_off)[1]) <= static_cast<std::int64_t>(k - j) * rf))) {
            for (std::size_t i = 0; i < deltas.size(); ++i) {
              const int p0 = o0 - deltas[i][0];
              const int p1 = o1 - deltas[i][1];
              if (p0 < -K || p0 > K || p1 < o1_lo || p1 > o1_hi) continue;
              const std::int64_t ps = state_index(p0, p1);
              const double base = cur[ps];
              if (base == kInf) continue;
              double step;
              if (mech) step = kinetic[i] + tauf * (f_st[ps] - v_st[ps]);
              else {
                const Vec v{deltas[i][0] * hf / tauf, deltas[i][1] * hf / tauf};
                const Vec r = v - b_st[ps];
                step = tauf * (0.5 * dot(r, r) + f_st[ps]);
              }
              best = std::min(best, base + step);
            }
          }
          nxt[s] = best;
        }
      cur.swap(nxt);
    }
    return cur;
  }
};

std::array<int, 2> fine_offset(const TorusGrid& grid, std::int64_t x, std::int64_t y, int k) {
  const auto cx = grid.coords(x);
  const auto cy = grid.coords(y);
  return {grid.wrap_diff(cy[0] - cx[0]) * k,
          grid.dim == 2 ? grid.wrap_diff(cy[1] - cx[1]) * k : 0};
}

}  // namespace

double refined_action(std::int64_t x, std::int64_t y, double tau, int k,
                      const LagrangianSpec& lag, const CouplingSpec& cpl, const GridMeasure& m,
                      double window_d) {
  const TorusGrid& grid = m.grid;
  const Vec disp = torus_displacement(x, y, grid);
  if (norm2(disp) > tau * window_d + kEps)
    throw std::invalid_argument("refined_action: displacement outside window");
  RefinedDp dp(grid, lag, cpl, m, tau, k, window_d);
  const auto off = fine_offset(grid, x, y, k);
  const auto final_level = dp.run(x, &off);
  return final_level[dp.state_index(off[0], off[1])];
}

std::vector<double> refined_action_from(std::int64_t x, double tau, int k,
                                        const LagrangianSpec& lag, const CouplingSpec& cpl,
                                        const GridMeasure& m, double window_d) {
  const TorusGrid& grid = m.grid;
  RefinedDp dp(grid, lag, cpl, m, tau, k, window_d);
  const auto final_level = dp.run(x, nullptr);
  const std::int64_t N = grid.num_nodes();
  std::vector<double> out(N, kInf);
  for (std::int64_t y = 0; y < N; ++y) {
    const Vec disp = torus_displacement(x, y, grid);
    if (norm2(disp) > tau * window_d + kEps) continue;
    const auto off = fine_offset(grid, x, y, k);
    out[y] = final_level[dp.state_index(off[0], off[1])];
  }
  return out;
}

}  // namespace tmfg
