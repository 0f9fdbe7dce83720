#include "tmfg/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tmfg/wasserstein.hpp"

namespace tmfg {

namespace {

double discrete_lipschitz(const std::vector<double>& u, const EdgeSet& es) {
  double lip = 0.0;
  for (std::int64_t e = 0; e < es.num_edges(); ++e) {
    const double len = es.tau * norm2(es.vel[e]);
    if (len == 0.0) continue;
    lip = std::max(lip, std::abs(u[es.tgt[e]] - u[es.src[e]]) / len);
  }
  return lip;
}

}  // namespace

double semigroup_check(const std::vector<double>& u, const GridMeasure& m, double c_est,
                       double t, int n_steps, const LagrangianSpec& lag,
                       const CouplingSpec& cpl, double window_d) {
  if (n_steps < 1) throw std::invalid_argument("semigroup_check: n_steps must be >= 1");
  SolverConfig fine;
  fine.tau = t / n_steps;
  fine.window_d = window_d;
  const auto edges = build_edge_set(m.grid, fine);
  const ActionTable table = build_action_table(edges, lag, cpl, m, fine.tau);
  std::vector<double> phi = u;
  for (int s = 0; s < n_steps; ++s) phi = lax_oleinik_apply(phi, table).first;
  double defect = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    defect = std::max(defect, std::abs(phi[i] - (u[i] - t * c_est)));
  return defect;
}

std::optional<double> fit_rate(const std::vector<double>& values,
                               const std::vector<double>& taus) {
  if (values.size() != taus.size())
    throw std::invalid_argument("fit_rate: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && taus[i] > 0.0) {
      lx.push_back(std::log(taus[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  if (lx.size() < 3) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

LadderReport run_ladder(ProblemContext base, const std::vector<double>& taus,
                        std::optional<double> c_ref_override) {
  if (taus.empty()) throw std::invalid_argument("run_ladder: empty tau list");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] < taus[i - 1]))
      throw std::invalid_argument("run_ladder: taus must be strictly decreasing");

  LadderReport rep;
  const double tmin = taus.back();
  if (base.grid.h > tmin * tmin / 4.0)
    rep.resolution_warning =
        "grid spacing h exceeds min(tau)^2/4; space error may dominate the finest rungs";
  if (c_ref_override) {
    rep.c_ref = *c_ref_override;
    rep.c_ref_analytic = true;
  } else if (base.lagrangian.family == LagrangianSpec::Family::Mechanical &&
             base.coupling.family == CouplingSpec::Family::Zero) {
    // Decoupled mechanical case: c = max V, read off the grid nodes.
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < base.grid.num_nodes(); ++i)
      vmax = std::max(vmax, base.lagrangian.potential.eval(base.grid.node(i)));
    rep.c_ref = vmax;
    rep.c_ref_analytic = true;
  }

  GridMeasure warm = GridMeasure::uniform(base.grid);
  std::vector<double> prev_u;
  std::optional<GridMeasure> prev_m;

  for (double tau : taus) {
    LadderRung rung;
    rung.tau = tau;
    try {
      ProblemContext ctx = base;
      ctx.cfg.tau = tau;
      ctx.edges.reset();

      FixedPointResult res = solve_fixed_point(warm, ctx);
      rung.converged = res.converged;
      rung.iterations = res.iterations;
      rung.lbar = res.wk.lbar;
      rung.boundary_hit = res.wk.window_boundary_hit;
      rung.lip_u = discrete_lipschitz(res.wk.u, *res.mu_star.edges);

      // Certificate gates before the rung enters the report.
      const ActionTable table =
          build_action_table(ctx.edge_set(), ctx.lagrangian, ctx.coupling, res.m_star, tau);
      if (verify_subaction(res.wk, table) > 1e-9)
        throw std::runtime_error("sub-action certificate failed");
      if (holonomy_residual(res.mu_star) > 1e-10)
        throw std::runtime_error("holonomy certificate failed");

      const ResidualReport rr = mfg_residuals(res, ctx, ctx.cfg.fourier_test_order);
      rung.residual_hj = rr.hj;
      rung.residual_continuity = rr.continuity;
      rung.closedness = closedness_residual(res.mu_star, ctx.cfg.fourier_test_order).continuous;

      const int n_steps = std::max(1, static_cast<int>(std::lround(8.0 / tau)));
      rung.semigroup_defect = semigroup_check(res.wk.u, res.m_star, res.c_est, 1.0, n_steps,
                                              ctx.lagrangian, ctx.coupling, ctx.cfg.window_d);

      rung.c_gap = std::abs(res.wk.lbar + rep.c_ref);
      if (!prev_u.empty()) {
        double d = 0.0;
        for (std::size_t i = 0; i < prev_u.size(); ++i)
          d = std::max(d, std::abs(res.wk.u[i] - prev_u[i]));
        rung.u_sup_diff = d;
        rung.d1_prev = wasserstein1(res.m_star, *prev_m);
      }

      prev_u = res.wk.u;
      prev_m = res.m_star;
      warm = res.m_star;
      rung.result = std::move(res);
    } catch (const std::exception& ex) {
      rung.failed = true;
      rung.fail_reason = ex.what();
    }
    rep.rungs.push_back(std::move(rung));
  }

  // Self-referential reference when no analytic value exists: finest
  // successful rung's -lbar, with gaps recomputed against it.
  if (!rep.c_ref_analytic) {
    for (auto it = rep.rungs.rbegin(); it != rep.rungs.rend(); ++it)
      if (!it->failed) {
        rep.c_ref = -it->lbar;
        break;
      }
    for (auto& r : rep.rungs)
      if (!r.failed) r.c_gap = std::abs(r.lbar + rep.c_ref);
  }

  if (rep.rungs.size() >= 3) {
    std::vector<double> ts, cg, ud;
    for (const auto& r : rep.rungs)
      if (!r.failed) {
        ts.push_back(r.tau);
        cg.push_back(r.c_gap);
        ud.push_back(r.u_sup_diff);
      }
    rep.c_gap_slope = fit_rate(cg, ts);
    if (ts.size() >= 4) {
      std::vector<double> t2(ts.begin() + 1, ts.end());
      std::vector<double> u2(ud.begin() + 1, ud.end());
      rep.u_diff_slope = fit_rate(u2, t2);
    }
  }
  return rep;
}

}  // namespace tmfg
