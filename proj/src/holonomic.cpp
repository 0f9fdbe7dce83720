#include "tmfg/holonomic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tmfg {

EdgeMeasure min_holonomic_measure(const ActionTable& table, const WeakKamSolution& sol) {
  const auto& cycle = sol.critical_cycle;
  if (cycle.size() < 2 || cycle.front() != cycle.back())
    throw std::invalid_argument("min_holonomic_measure: malformed critical cycle");
  EdgeMeasure mu;
  mu.edges = table.edges;
  const std::size_t len = cycle.size() - 1;
  for (std::size_t i = 0; i < len; ++i) {
    const std::int64_t e = table.edges->find_edge(cycle[i], cycle[i + 1]);
    if (e < 0) throw std::runtime_error("min_holonomic_measure: cycle edge missing");
    mu.entries.push_back({e, 1.0 / static_cast<double>(len)});
  }
  std::sort(mu.entries.begin(), mu.entries.end());
  return mu;
}

double holonomy_residual(const EdgeMeasure& mu) {
  const EdgeSet& es = *mu.edges;
  std::map<std::int64_t, double> balance;  // inflow - outflow per touched node
  for (const auto& [e, w] : mu.entries) {
    balance[es.tgt[e]] += w;
    balance[es.src[e]] -= w;
  }
  double worst = 0.0;
  for (const auto& [node, b] : balance) worst = std::max(worst, std::abs(b));
  return worst;
}

GridMeasure project_measure(const EdgeMeasure& mu) {
  const EdgeSet& es = *mu.edges;
  std::vector<double> w(es.grid.num_nodes(), 0.0);
  for (const auto& [e, wt] : mu.entries) w[es.src[e]] += wt;
  return GridMeasure(es.grid, std::move(w));
}

double measure_action(const EdgeMeasure& mu, const ActionTable& table) {
  if (mu.edges.get() != table.edges.get() && !(mu.edges->grid == table.edges->grid &&
                                               mu.edges->num_edges() == table.edges->num_edges()))
    throw std::invalid_argument("measure_action: edge set mismatch");
  double s = 0.0;
  for (const auto& [e, w] : mu.entries) s += w * table.cost[e];
  return s / table.tau;
}

ClosednessReport closedness_residual(const EdgeMeasure& mu, int order) {
  if (order < 1) throw std::invalid_argument("closedness_residual: order must be >= 1");
  const EdgeSet& es = *mu.edges;
  const auto modes = test_modes(es.grid.dim, order);
  ClosednessReport rep;
  for (const auto& phi : modes) {
    double cont = 0.0, disc = 0.0;
    for (const auto& [e, w] : mu.entries) {
      const Vec x = es.grid.node(es.src[e]);
      const Vec v = es.vel[e];
      cont += w * dot(v, phi.grad(x));
      disc += w * (phi.eval(x + es.tau * v) - phi.eval(x)) / es.tau;
    }
    rep.continuous = std::max(rep.continuous, std::abs(cont));
    rep.discrete = std::max(rep.discrete, std::abs(disc));
  }
  return rep;
}

EdgeMeasure mix_edge_measures(const EdgeMeasure& a, const EdgeMeasure& b, double t) {
  EdgeMeasure out;
  out.edges = a.edges;
  std::map<std::int64_t, double> acc;
  for (const auto& [e, w] : a.entries) acc[e] += (1.0 - t) * w;
  for (const auto& [e, w] : b.entries) acc[e] += t * w;
  for (const auto& [e, w] : acc)
    if (w != 0.0) out.entries.push_back({e, w});
  return out;
}

}  // namespace tmfg
