#include "tmfg/coupling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tmfg {

std::vector<double> CouplingSpec::eval_all(const TorusGrid& grid, const GridMeasure& m) const {
  const std::int64_t N = grid.num_nodes();
  std::vector<double> out(N, 0.0);
  switch (family) {
    case Family::Zero:
      break;
    case Family::Separable: {
      const double gm = g.eval(moment_of(m));
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < N; ++i) out[i] = f.eval(grid.node(i)) * gm;
      break;
    }
    case Family::Convolution: {
      // Sparse support of m keeps this O(N * nnz).
      std::vector<std::pair<Vec, double>> atoms;
      for (std::int64_t j = 0; j < N; ++j)
        if (m.w[j] != 0.0) atoms.push_back({m.grid.node(j), m.w[j]});
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < N; ++i) {
        const Vec x = grid.node(i);
        double s = 0.0;
        for (const auto& [y, w] : atoms) s += w * kernel.eval(x - y);
        out[i] = kappa * s;
      }
      break;
    }
  }
  return out;
}

}  // namespace tmfg
