#pragma once

#include <memory>
#include <vector>

#include "tmfg/config.hpp"
#include "tmfg/coupling.hpp"
#include "tmfg/holonomic.hpp"
#include "tmfg/lagrangian.hpp"
#include "tmfg/weakkam.hpp"

namespace tmfg {

// One stationary MFG problem instance. The edge set depends only on
// (grid, tau, window_d) and is cached here across best-response calls.
struct ProblemContext {
  TorusGrid grid;
  LagrangianSpec lagrangian;
  CouplingSpec coupling;
  SolverConfig cfg;

  std::shared_ptr<const EdgeSet> edges;  // built lazily

  std::shared_ptr<const EdgeSet> edge_set();
};

struct BestResponse {
  ActionTable table;
  WeakKamSolution wk;
  EdgeMeasure mu;
  GridMeasure projected;
};

// The map m -> (minimizing holonomic measure for L_m, its projection).
// Deterministic single-valued selection.
BestResponse best_response(const GridMeasure& m, ProblemContext& ctx);

struct FixedPointResult {
  GridMeasure m_star;
  EdgeMeasure mu_star;
  WeakKamSolution wk;
  double c_est = 0.0;  // -lbar at the returned iterate
  int iterations = 0;
  std::vector<double> d1_history;  // d1(m_k, Psi(m_k)) per iteration
  bool converged = false;
};

// Damped best-response iteration m_{k+1} = (1-theta) m_k + theta Psi(m_k).
// Non-convergence is reported, never thrown; the best iterate by residual is
// returned.
FixedPointResult solve_fixed_point(const GridMeasure& m0, ProblemContext& ctx);

struct ResidualReport {
  double hj = 0.0;          // max_y |H(y,p(y)) - F(y,m) - c_est|
  double continuity = 0.0;  // max over test modes of |sum m Df . H_p|
  double continuity_edge = 0.0;  // edge form sum mu_e v_e . Df(x_e)
  double mass_defect = 0.0;
};

ResidualReport mfg_residuals(const FixedPointResult& res, ProblemContext& ctx, int order);

}  // namespace tmfg
