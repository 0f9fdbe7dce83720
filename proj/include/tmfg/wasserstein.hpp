#pragma once

#include "tmfg/measure.hpp"

namespace tmfg {

// Exact Kantorovich-Rubinstein distance d1 between grid measures.
//
// d = 1: circle formula, min over a scalar shift of the integral of the CDF
// difference; the shift is an exact weighted median.
// d = 2: exact min-cost flow on the torus grid graph (axis edges of length h,
// so the ground metric is the graph geodesic), successive shortest paths with
// potentials. Intended for n <= 64.
double wasserstein1(const GridMeasure& m1, const GridMeasure& m2);

}  // namespace tmfg
