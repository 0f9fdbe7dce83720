#include "tmfg/mfg.hpp"

#include <algorithm>
#include <cmath>

#include "tmfg/wasserstein.hpp"

namespace tmfg {

std::shared_ptr<const EdgeSet> ProblemContext::edge_set() {
  if (!edges || edges->tau != cfg.tau || edges->window_d != cfg.window_d ||
      edges->grid != grid)
    edges = build_edge_set(grid, cfg);
  return edges;
}

namespace {

BestResponse respond(ActionTable table, const SolverConfig& cfg) {
  BestResponse br;
  br.wk = solve_weak_kam(table, cfg);
  br.mu = min_holonomic_measure(table, br.wk);
  br.projected = project_measure(br.mu);
  br.table = std::move(table);
  return br;
}

}  // namespace

BestResponse best_response(const GridMeasure& m, ProblemContext& ctx) {
  return respond(build_action_table(ctx.edge_set(), ctx.lagrangian, ctx.coupling, m, ctx.cfg.tau),
                 ctx.cfg);
}

FixedPointResult solve_fixed_point(const GridMeasure& m0, ProblemContext& ctx) {
  ctx.cfg.validate();
  const double theta = ctx.cfg.damping_theta;

  GridMeasure m = m0;
  FixedPointResult res;
  double best_resid = std::numeric_limits<double>::infinity();

  // The action table determines the response entirely; when the coupling does
  // not move the costs (Zero coupling, converged measure, constant shift) the
  // previous solve is reused.
  std::vector<double> prev_cost;
  BestResponse br;

  for (int it = 0; it < ctx.cfg.max_iters; ++it) {
    ActionTable table =
        build_action_table(ctx.edge_set(), ctx.lagrangian, ctx.coupling, m, ctx.cfg.tau);
    if (prev_cost.empty() || table.cost != prev_cost) {
      prev_cost = table.cost;
      br = respond(std::move(table), ctx.cfg);
    }
    const double resid = wasserstein1(m, br.projected);
    res.d1_history.push_back(resid);
    res.iterations = it + 1;
    if (resid < best_resid) {
      best_resid = resid;
      res.m_star = m;
      res.mu_star = br.mu;
      res.wk = br.wk;
    }
    if (resid <= ctx.cfg.fp_tol) {
      res.converged = true;
      break;
    }
    std::vector<double> mixed(m.w.size());
    for (std::size_t i = 0; i < mixed.size(); ++i)
      mixed[i] = (1.0 - theta) * m.w[i] + theta * br.projected.w[i];
    m = GridMeasure(m.grid, std::move(mixed));
  }
  res.c_est = -res.wk.lbar;
  return res;
}

ResidualReport mfg_residuals(const FixedPointResult& res, ProblemContext& ctx, int order) {
  const GridMeasure& m = res.m_star;
  const TorusGrid& grid = m.grid;
  const std::int64_t N = grid.num_nodes();
  const EdgeSet& es = *res.mu_star.edges;
  const auto f_cache = ctx.coupling.eval_all(grid, m);

  ResidualReport rep;

  // Scheme-consistent gradient: p(y) = dL/dv at the recorded argmin edge.
  std::vector<Vec> p(N);
  for (std::int64_t y = 0; y < N; ++y) {
    const std::int64_t e = res.wk.argmin_edge[y];
    const Vec xsrc = grid.node(es.src[e]);
    p[y] = ctx.lagrangian.velocity_gradient(xsrc, es.vel[e]);
    const double r =
        std::abs(ctx.lagrangian.hamiltonian(grid.node(y), p[y]) - f_cache[y] - res.c_est);
    rep.hj = std::max(rep.hj, r);
  }

  const auto modes = test_modes(grid.dim, order);
  for (const auto& f : modes) {
    double node_form = 0.0;
    for (std::int64_t y = 0; y < N; ++y) {
      if (m.w[y] == 0.0) continue;
      const Vec x = grid.node(y);
      node_form += m.w[y] * dot(f.grad(x), ctx.lagrangian.hamiltonian_gradient(x, p[y]));
    }
    double edge_form = 0.0;
    for (const auto& [e, w] : res.mu_star.entries)
      edge_form += w * dot(es.vel[e], f.grad(grid.node(es.src[e])));
    rep.continuity = std::max(rep.continuity, std::abs(node_form));
    rep.continuity_edge = std::max(rep.continuity_edge, std::abs(edge_form));
  }

  rep.mass_defect = std::abs(m.mass() - 1.0);
  return rep;
}

}  // namespace tmfg
