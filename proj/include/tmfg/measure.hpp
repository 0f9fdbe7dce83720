#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "tmfg/grid.hpp"

namespace tmfg {

// Probability weights on grid nodes. Normalized on construction; negative
// input weights are rejected.
struct GridMeasure {
  TorusGrid grid;
  std::vector<double> w;

  GridMeasure() = default;

  GridMeasure(TorusGrid g, std::vector<double> weights) : grid(g), w(std::move(weights)) {
    if (static_cast<std::int64_t>(w.size()) != grid.num_nodes())
      throw std::invalid_argument("GridMeasure: weight vector size mismatch");
    double sum = 0.0;
    for (double v : w) {
      if (v < -1e-14) throw std::invalid_argument("GridMeasure: negative weight");
      sum += v;
    }
    if (sum <= 0.0) throw std::invalid_argument("GridMeasure: total mass must be positive");
    for (double& v : w) v = (v < 0.0 ? 0.0 : v) / sum;
  }

  static GridMeasure uniform(const TorusGrid& g) {
    return GridMeasure(g, std::vector<double>(g.num_nodes(), 1.0));
  }

  static GridMeasure dirac(const TorusGrid& g, std::int64_t node) {
    std::vector<double> v(g.num_nodes(), 0.0);
    v.at(node) = 1.0;
    return GridMeasure(g, std::move(v));
  }

  double mass() const { return std::accumulate(w.begin(), w.end(), 0.0); }
};

}  // namespace tmfg
