#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tmfg/config.hpp"
#include "tmfg/grid.hpp"

namespace tmfg {

// Bounded-window transition graph: for each target node y, the source nodes x
// with |torus_displacement(x,y)| <= tau * window_d. Edges are stored sorted
// lexicographically by (target, source); CSR offsets index by target.
struct EdgeSet {
  TorusGrid grid;
  double tau = 0.0;
  double window_d = 0.0;

  std::vector<std::int32_t> src;
  std::vector<std::int32_t> tgt;
  std::vector<Vec> vel;                 // v = displacement / tau
  std::vector<std::int64_t> tgt_begin;  // size num_nodes()+1

  std::int64_t num_edges() const { return static_cast<std::int64_t>(src.size()); }

  // Edge index for (source, target), or -1 if absent. Binary search within the
  // target's source list.
  std::int64_t find_edge(std::int64_t source, std::int64_t target) const;

  // True if the window does not saturate the torus, i.e. a displacement can
  // actually sit on the window boundary.
  bool has_boundary() const;

  // An edge counts as a boundary hit when its displacement lands in the
  // outermost grid shell of the window.
  bool near_boundary(std::int64_t edge) const;
};

std::shared_ptr<const EdgeSet> build_edge_set(const TorusGrid& grid, const SolverConfig& cfg);

}  // namespace tmfg
