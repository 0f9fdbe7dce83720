#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmfg/mfg.hpp"

namespace tmfg {

struct LadderRung {
  double tau = 0.0;
  bool failed = false;
  std::string fail_reason;
  bool converged = false;
  int iterations = 0;
  double lbar = 0.0;
  double c_gap = 0.0;         // |lbar + c_ref|
  double u_sup_diff = 0.0;    // to previous rung (0 on first)
  double d1_prev = 0.0;       // to previous rung's m (0 on first)
  double residual_hj = 0.0;
  double residual_continuity = 0.0;
  double closedness = 0.0;
  double semigroup_defect = 0.0;
  double lip_u = 0.0;         // discrete Lipschitz constant of u over edges
  bool boundary_hit = false;
  std::optional<FixedPointResult> result;  // absent when failed
};

struct LadderReport {
  std::vector<LadderRung> rungs;
  double c_ref = 0.0;
  bool c_ref_analytic = false;  // false: self-referential (finest rung's -lbar)
  std::optional<double> c_gap_slope;
  std::optional<double> u_diff_slope;

  // Set when h > min(tau)^2/4: the space error may not be subdominant to the
  // tau rate on the finest rungs. Informational, never fatal.
  std::string resolution_warning;

  // Last successful rung's solution, the candidate (u0, m0); null if none.
  const FixedPointResult* final_result() const {
    for (auto it = rungs.rbegin(); it != rungs.rend(); ++it)
      if (it->result) return &*it->result;
    return nullptr;
  }
};

// tau-ladder experiment: solve the fixed point on each rung (warm-started),
// then run all diagnostics. A non-convergent or throwing rung is marked
// failed and the ladder continues.
LadderReport run_ladder(ProblemContext base, const std::vector<double>& taus,
                        std::optional<double> c_ref_override = std::nullopt);

// Defect of the semigroup identity, approximating T_t by composing the
// discrete operator n_steps times at step t/n_steps with m frozen.
double semigroup_check(const std::vector<double>& u, const GridMeasure& m, double c_est,
                       double t, int n_steps, const LagrangianSpec& lag,
                       const CouplingSpec& cpl, double window_d);

// OLS slope of log(value) against log(tau). Nonpositive values are dropped;
// needs at least 3 usable points.
std::optional<double> fit_rate(const std::vector<double>& values, const std::vector<double>& taus);

}  // namespace tmfg
