#pragma once

#include <cstdint>
#include <stdexcept>

namespace tmfg {

// Solver knobs shared by all pipelines. Times are dimensionless torus units.
struct SolverConfig {
  double tau = 0.1;
  double window_d = 3.0;           // admissible displacements: |y-x| <= tau*window_d
  std::int64_t anchor_node = 0;    // u(anchor) = 0
  double damping_theta = 0.5;      // fixed-point damping, (0,1]
  double fp_tol = 1e-4;            // d1 stopping tolerance
  double wk_tol = 1e-9;            // weak-KAM sup-norm certificate tolerance
  int max_iters = 500;
  std::uint64_t rng_seed = 1;
  int fourier_test_order = 8;      // max mode order for residual batteries

  void validate() const {
    if (!(tau > 0.0 && tau <= 1.0))
      throw std::invalid_argument("SolverConfig: tau must be in (0,1]");
    if (window_d < 1.0)
      throw std::invalid_argument("SolverConfig: window_d must be >= 1");
    if (!(damping_theta > 0.0 && damping_theta <= 1.0))
      throw std::invalid_argument("SolverConfig: damping_theta must be in (0,1]");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  }
};

}  // namespace tmfg
