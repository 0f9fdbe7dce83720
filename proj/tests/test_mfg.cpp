#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tmfg/mfg.hpp"
#include "tmfg/wasserstein.hpp"

using namespace tmfg;

namespace {

ProblemContext make_ctx(int dim, int n, const LagrangianSpec& lag, const CouplingSpec& cpl,
                        double tau, double theta = 1.0) {
  ProblemContext ctx;
  ctx.grid = TorusGrid(dim, n);
  ctx.lagrangian = lag;
  ctx.coupling = cpl;
  ctx.cfg.tau = tau;
  ctx.cfg.window_d = 3.0;
  ctx.cfg.damping_theta = theta;
  ctx.cfg.fp_tol = 1e-8;
  ctx.cfg.max_iters = 100;
  return ctx;
}

GridMeasure random_measure(const TorusGrid& g, std::mt19937_64& rng, int atoms) {
  std::vector<double> w(g.num_nodes(), 0.0);
  std::uniform_int_distribution<std::int64_t> node(0, g.num_nodes() - 1);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  for (int i = 0; i < atoms; ++i) w[node(rng)] += mass(rng);
  return GridMeasure(g, std::move(w));
}

}  // namespace

TEST_CASE("measure-independent problems converge in at most two sweeps") {
  // Zero coupling: the best response never changes, so the undamped iteration
  // stops immediately once the response reproduces itself.
  {
    auto ctx = make_ctx(1, 64, LagrangianSpec::mechanical(FourierSeries::cosine(1)),
                        CouplingSpec::zero(), 0.2);
    const auto res = solve_fixed_point(GridMeasure::uniform(ctx.grid), ctx);
    CHECK(res.converged);
    CHECK(res.iterations <= 2);
    CHECK(res.c_est == doctest::Approx(-res.wk.lbar).epsilon(1e-15));
  }
  // Separable coupling with constant moment phi: F depends on m only through
  // the total mass, which is always 1 -> same behaviour.
  {
    const auto cpl = CouplingSpec::separable(FourierSeries::cosine(1),
                                             FourierSeries::constant(1.0), {}, 1.0, 0.0);
    auto ctx = make_ctx(1, 64, LagrangianSpec::mechanical(FourierSeries{}), cpl, 0.2);
    const auto res = solve_fixed_point(GridMeasure::uniform(ctx.grid), ctx);
    CHECK(res.converged);
    CHECK(res.iterations <= 2);
  }
}

TEST_CASE("adding a constant to the coupling shifts c_est and nothing else") {
  const auto lag = LagrangianSpec::mechanical(FourierSeries::cosine(1));
  auto ctx0 = make_ctx(1, 64, lag, CouplingSpec::zero(), 0.2);
  const auto shift = CouplingSpec::separable(FourierSeries::constant(1.0),
                                             FourierSeries::constant(1.0), {}, 1.0, 0.0);
  auto ctx1 = make_ctx(1, 64, lag, shift, 0.2);

  const auto r0 = solve_fixed_point(GridMeasure::uniform(ctx0.grid), ctx0);
  const auto r1 = solve_fixed_point(GridMeasure::uniform(ctx1.grid), ctx1);
  REQUIRE(r0.converged);
  REQUIRE(r1.converged);
  // F = +1 raises lbar by 1, so c_est = -lbar drops by exactly 1.
  CHECK(r1.c_est == doctest::Approx(r0.c_est - 1.0).epsilon(1e-12));
  CHECK(wasserstein1(r0.m_star, r1.m_star) <= 1e-14);
  for (std::size_t i = 0; i < r0.wk.u.size(); ++i)
    CHECK(r1.wk.u[i] == doctest::Approx(r0.wk.u[i]).epsilon(1e-12));
}

TEST_CASE("fixed-point solve is deterministic, bit for bit") {
  FourierSeries rho;
  rho.a0 = 1.0;
  rho.modes.push_back({{1, 0}, 1.0, 0.0});
  const auto cpl = CouplingSpec::convolution(rho, 1.0, 2.0, 2.0 * M_PI);
  const auto lag = LagrangianSpec::mechanical(FourierSeries::cosine(1));

  auto ctx_a = make_ctx(1, 64, lag, cpl, 0.1, 0.5);
  auto ctx_b = make_ctx(1, 64, lag, cpl, 0.1, 0.5);
  const auto ra = solve_fixed_point(GridMeasure::uniform(ctx_a.grid), ctx_a);
  const auto rb = solve_fixed_point(GridMeasure::uniform(ctx_b.grid), ctx_b);
  CHECK(ra.iterations == rb.iterations);
  CHECK(ra.c_est == rb.c_est);
  for (std::size_t i = 0; i < ra.m_star.w.size(); ++i) CHECK(ra.m_star.w[i] == rb.m_star.w[i]);
  for (std::size_t i = 0; i < ra.wk.u.size(); ++i) CHECK(ra.wk.u[i] == rb.wk.u[i]);
}

TEST_CASE("effective critical value is lipschitz in the measure argument") {
  FourierSeries rho;
  rho.a0 = 1.0;
  rho.modes.push_back({{1, 0}, 0.5, 0.5});
  const auto cpl = CouplingSpec::convolution(rho, 1.0, 2.0, std::sqrt(2.0) * M_PI);
  auto ctx = make_ctx(1, 32, LagrangianSpec::mechanical(FourierSeries::cosine(1)), cpl, 0.25);

  std::mt19937_64 rng(1312);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m1 = random_measure(ctx.grid, rng, 4);
    const auto m2 = random_measure(ctx.grid, rng, 4);
    const auto b1 = best_response(m1, ctx);
    const auto b2 = best_response(m2, ctx);
    const double d = wasserstein1(m1, m2);
    // |min mean cycle(A_1) - min mean cycle(A_2)| <= max_x |F(x,m1)-F(x,m2)|.
    CHECK(std::abs(b1.wk.lbar - b2.wk.lbar) <= cpl.lip_f * d + 1e-12);
  }
}

TEST_CASE("crowd-seeking coupling concentrates near the effective maximum") {
  // Small attractive convolution term: the equilibrium stays an atom near the
  // maximizer of V, which the kernel then deepens.
  FourierSeries rho;
  rho.a0 = 1.0;
  rho.modes.push_back({{1, 0}, 1.0, 0.0});
  const auto cpl = CouplingSpec::convolution(rho, -0.2, 1.0, 0.4 * M_PI);
  auto ctx = make_ctx(1, 128, LagrangianSpec::mechanical(FourierSeries::cosine(1)), cpl, 0.1, 0.5);
  const auto res = solve_fixed_point(GridMeasure::uniform(ctx.grid), ctx);
  REQUIRE(res.converged);
  double center = 0.0, mass_near_zero = 0.0;
  for (std::int64_t i = 0; i < ctx.grid.num_nodes(); ++i) {
    const double d = torus_distance(0, i, ctx.grid);
    if (d <= 2.0 * ctx.grid.h + 1e-12) mass_near_zero += res.m_star.w[i];
    center = std::max(center, res.m_star.w[i]);
  }
  // The damped average keeps theta^iterations of the uniform start spread out.
  CHECK(mass_near_zero >= 1.0 - 1e-6);
}

TEST_CASE("residuals on benign instances") {
  // Flat problem: every residual is at numerical zero.
  {
    auto ctx = make_ctx(1, 64, LagrangianSpec::mechanical(FourierSeries{}),
                        CouplingSpec::zero(), 0.2);
    auto res = solve_fixed_point(GridMeasure::uniform(ctx.grid), ctx);
    REQUIRE(res.converged);
    const auto rr = mfg_residuals(res, ctx, 8);
    // u is a shortest-path potential; away from the critical loop the argmin
    // velocity is one grid quantum h/tau, giving hj = (h/tau)^2 / 2 exactly.
    const double q = ctx.grid.h / ctx.cfg.tau;
    CHECK(rr.hj <= q * q);
    CHECK(rr.continuity <= 1e-10);
    CHECK(rr.continuity_edge <= 1e-10);
    CHECK(rr.mass_defect <= 1e-12);
  }
  // Cosine potential: the equilibrium is the atom at the maximum; the
  // continuity equation holds exactly on a self-loop.
  {
    auto ctx = make_ctx(1, 128, LagrangianSpec::mechanical(FourierSeries::cosine(1)),
                        CouplingSpec::zero(), 0.1);
    auto res = solve_fixed_point(GridMeasure::uniform(ctx.grid), ctx);
    REQUIRE(res.converged);
    const auto rr = mfg_residuals(res, ctx, 8);
    CHECK(rr.continuity <= 1e-8);
    CHECK(rr.continuity_edge <= 1e-8);
  }
}

TEST_CASE("iteration history is recorded and bounded") {
  FourierSeries rho;
  rho.a0 = 1.0;
  rho.modes.push_back({{1, 0}, 1.0, 0.0});
  const auto cpl = CouplingSpec::convolution(rho, 1.0, 2.0, 2.0 * M_PI);
  auto ctx = make_ctx(1, 64, LagrangianSpec::mechanical(FourierSeries::cosine(1)), cpl, 0.1, 0.5);
  const auto res = solve_fixed_point(GridMeasure::uniform(ctx.grid), ctx);
  CHECK(res.d1_history.size() == static_cast<std::size_t>(res.iterations));
  for (double d : res.d1_history) {
    CHECK(d >= 0.0);
    CHECK(d <= 0.5 * std::sqrt(2.0) + 1e-12);  // d1 diameter of the torus
  }
  if (res.converged) CHECK(res.d1_history.back() <= ctx.cfg.fp_tol);
}
