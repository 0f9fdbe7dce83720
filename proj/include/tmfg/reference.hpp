#pragma once

#include "tmfg/action.hpp"
#include "tmfg/weakkam.hpp"

// Straight serial implementations of the parallel kernels, kept for testing
// and benchmarking. Outputs must match the OpenMP paths bit for bit.
namespace tmfg::ref {

std::vector<double> action_costs_serial(const EdgeSet& edges, const LagrangianSpec& lag,
                                        const CouplingSpec& cpl, const GridMeasure& m,
                                        double tau);

std::vector<double> lax_oleinik_apply_serial(const std::vector<double>& phi,
                                             const ActionTable& table);

double karp_min_mean_serial(const ActionTable& table);

}  // namespace tmfg::ref
