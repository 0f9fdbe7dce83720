#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tmfg/action.hpp"
#include "tmfg/config.hpp"

namespace tmfg {

// Solution of the discrete Lax-Oleinik equation on the window graph:
//   u(y) + abar = min over in-edges ( u(x) + A(x,y) )
// with u(anchor) = 0. abar is the exact minimum mean cycle value of the
// action graph; lbar = abar/tau is the effective Lagrangian.
struct WeakKamSolution {
  std::vector<double> u;
  double abar = 0.0;
  double lbar = 0.0;
  std::vector<std::int64_t> argmin_edge;   // per node, index of a minimizing in-edge
  std::vector<std::int64_t> critical_cycle;  // node list, closed (first == last)
  bool window_boundary_hit = false;        // some argmin landed on the window shell
};

// One application of the Lax-Oleinik operator. Ties broken toward the
// smallest source index. Returns the new potentials and chosen edges.
std::pair<std::vector<double>, std::vector<std::int64_t>> lax_oleinik_apply(
    const std::vector<double>& phi, const ActionTable& table);

// Exact minimum mean cycle by Karp's recurrence; returns (abar, one attaining
// cycle as a closed node list). Deterministic tie-breaking: smallest head
// node, then shortest cycle.
std::pair<double, std::vector<std::int64_t>> effective_constant_karp(const ActionTable& table);

WeakKamSolution solve_weak_kam(const ActionTable& table, const SolverConfig& cfg);

// Max over edges of (abar - A(x,y) - u(x) + u(y)); a valid sub-action
// certificate keeps this <= ~1e-9.
double verify_subaction(const WeakKamSolution& sol, const ActionTable& table);

// Edges where the sub-action inequality is an equality up to tol (the contact
// set). Throws if empty.
std::vector<std::int64_t> extract_N_tau(const WeakKamSolution& sol, const ActionTable& table,
                                        double tol);

}  // namespace tmfg
