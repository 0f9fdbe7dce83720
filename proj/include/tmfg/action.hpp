#pragma once

#include <memory>
#include <vector>

#include "tmfg/coupling.hpp"
#include "tmfg/edges.hpp"
#include "tmfg/lagrangian.hpp"
#include "tmfg/measure.hpp"

namespace tmfg {

// Discrete one-step action on the window graph:
//   A(x,y) = tau * ( L(x, (y-x)/tau) + F(x,m) ).
// F is evaluated once per source node and cached.
struct ActionTable {
  std::shared_ptr<const EdgeSet> edges;
  std::vector<double> cost;  // per edge, same order as edges
  double tau = 0.0;

  const TorusGrid& grid() const { return edges->grid; }
  std::int64_t num_edges() const { return edges->num_edges(); }
};

ActionTable build_action_table(std::shared_ptr<const EdgeSet> edges, const LagrangianSpec& lag,
                               const CouplingSpec& cpl, const GridMeasure& m, double tau);

// k-fold composition of one-step actions between grid nodes x and y, computed
// by dynamic programming on a k-times refined lattice (spacing h/k, step
// tau/k) so that the per-step velocity quantum stays h/tau. Approximates the
// continuous minimal action between x and y as k grows. k must be a power of
// two; |y-x| must lie inside the window.
double refined_action(std::int64_t x, std::int64_t y, double tau, int k,
                      const LagrangianSpec& lag, const CouplingSpec& cpl, const GridMeasure& m,
                      double window_d);

// Same DP run once from a single source; returns the refined action for every
// coarse node y inside the window (indexed by node, nodes outside the window
// hold +inf).
std::vector<double> refined_action_from(std::int64_t x, double tau, int k,
                                        const LagrangianSpec& lag, const CouplingSpec& cpl,
                                        const GridMeasure& m, double window_d);

}  // namespace tmfg
