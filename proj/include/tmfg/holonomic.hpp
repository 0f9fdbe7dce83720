#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tmfg/action.hpp"
#include "tmfg/measure.hpp"
#include "tmfg/weakkam.hpp"

namespace tmfg {

// Probability weights on edges of an EdgeSet; a unit-mass circulation when
// holonomic. Stored sparse as (edge index, weight), sorted by edge index.
struct EdgeMeasure {
  std::shared_ptr<const EdgeSet> edges;
  std::vector<std::pair<std::int64_t, double>> entries;

  double mass() const {
    double s = 0.0;
    for (const auto& [e, w] : entries) s += w;
    return s;
  }
};

// The vertex optimum of the circulation program: uniform weights on the
// edges of the minimum mean cycle.
EdgeMeasure min_holonomic_measure(const ActionTable& table, const WeakKamSolution& sol);

// Max over nodes of |inflow - outflow|.
double holonomy_residual(const EdgeMeasure& mu);

// Spatial marginal: node weight = sum of mu over edges with that source.
GridMeasure project_measure(const EdgeMeasure& mu);

// sum_e mu_e * cost_e / tau; equals lbar for the minimizing measure.
double measure_action(const EdgeMeasure& mu, const ActionTable& table);

struct ClosednessReport {
  double continuous = 0.0;  // max_|phi| of |sum mu_e v_e . Dphi(x_e)|, modes of order <= K
  double discrete = 0.0;    // same with the exact difference quotient; ~0 by holonomy
};

ClosednessReport closedness_residual(const EdgeMeasure& mu, int order);

// Convex combination (1-t)*a + t*b on a shared edge set.
EdgeMeasure mix_edge_measures(const EdgeMeasure& a, const EdgeMeasure& b, double t);

}  // namespace tmfg
