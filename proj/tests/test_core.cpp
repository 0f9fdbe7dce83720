#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tmfg/coupling.hpp"
#include "tmfg/grid.hpp"
#include "tmfg/lagrangian.hpp"
#include "tmfg/measure.hpp"
#include "tmfg/wasserstein.hpp"

using namespace tmfg;

namespace {

// Exhaustive transportation oracle for tiny instances: enumerate every
// spanning-tree-supported basic solution of the transport polytope.
double brute_force_w1(const std::vector<double>& supply, const std::vector<double>& demand,
                      const std::vector<std::vector<double>>& cost) {
  const int r = static_cast<int>(supply.size());
  const int c = static_cast<int>(demand.size());
  const int ne = r * c;
  const int basis = r + c - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(basis);

  // Iterate over all edge subsets of size r+c-1.
  std::vector<bool> mask(ne, false);
  std::fill(mask.begin(), mask.begin() + basis, true);
  std::vector<int> edges;
  do {
    edges.clear();
    for (int e = 0; e < ne; ++e)
      if (mask[e]) edges.push_back(e);
    // Solve the flow on this subset by repeated leaf elimination.
    std::vector<double> s = supply, d = demand, flow(ne, 0.0);
    std::vector<bool> alive(edges.size(), true);
    std::vector<int> sdeg(r, 0), ddeg(c, 0);
    for (int e : edges) {
      ++sdeg[e / c];
      ++ddeg[e % c];
    }
    bool ok = true;
    for (int round = 0; round < basis && ok; ++round) {
      int leaf = -1;
      for (std::size_t i = 0; i < edges.size(); ++i)
        if (alive[i] && (sdeg[edges[i] / c] == 1 || ddeg[edges[i] % c] == 1)) {
          leaf = static_cast<int>(i);
          break;
        }
      if (leaf < 0) {
        ok = false;  // subset contains a cycle
        break;
      }
      const int e = edges[leaf];
      const int i = e / c, j = e % c;
      const double f = sdeg[i] == 1 ? s[i] : d[j];
      flow[e] = f;
      s[i] -= f;
      d[j] -= f;
      alive[leaf] = false;
      --sdeg[i];
      --ddeg[j];
    }
    if (ok) {
      bool feasible = true;
      double total = 0.0;
      for (int e = 0; e < ne; ++e) {
        if (flow[e] < -1e-12) feasible = false;
        total += flow[e] * cost[e / c][e % c];
      }
      for (double v : s)
        if (std::abs(v) > 1e-12) feasible = false;
      if (feasible) best = std::min(best, total);
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

double l1_torus_distance(std::int64_t a, std::int64_t b, const TorusGrid& g) {
  const Vec d = torus_displacement(a, b, g);
  return std::abs(d[0]) + std::abs(d[1]);
}

GridMeasure random_measure(const TorusGrid& g, std::mt19937_64& rng, int atoms) {
  std::vector<double> w(g.num_nodes(), 0.0);
  std::uniform_int_distribution<std::int64_t> node(0, g.num_nodes() - 1);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  for (int i = 0; i < atoms; ++i) w[node(rng)] += mass(rng);
  return GridMeasure(g, std::move(w));
}

}  // namespace

TEST_CASE("torus displacement representative") {
  TorusGrid g(1, 10);
  CHECK(torus_displacement(0, 1, g)[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(torus_displacement(0, 9, g)[0] == doctest::Approx(-0.1).epsilon(1e-14));

  TorusGrid g2(2, 4);
  const Vec d = torus_displacement(g2.index(0, 0), g2.index(2, 3), g2);
  CHECK(d[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("displacement antisymmetry and bounds") {
  TorusGrid g(2, 8);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> node(0, g.num_nodes() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t x = node(rng), y = node(rng);
    const Vec dxy = torus_displacement(x, y, g);
    const Vec dyx = torus_displacement(y, x, g);
    for (int a = 0; a < 2; ++a) {
      CHECK(dxy[a] >= -0.5);
      CHECK(dxy[a] < 0.5);
      if (dxy[a] != -0.5)  // antipodal boundary maps asymmetrically
        CHECK(dxy[a] == doctest::Approx(-dyx[a]).epsilon(1e-14));
    }
  }
}

TEST_CASE("half-open wrap of the antipodal offset") {
  TorusGrid g(1, 8);
  CHECK(g.wrap_diff(4) == -4);
  CHECK(g.wrap_diff(3) == 3);
  CHECK(g.wrap_diff(-4) == -4);
  CHECK(g.wrap_diff(5) == -3);
}

TEST_CASE("lagrangian family values") {
  const auto mech = LagrangianSpec::mechanical(FourierSeries::cosine(1));
  CHECK(mech.lagrangian({0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(-1.0).epsilon(1e-14));

  const auto kinetic = LagrangianSpec::mechanical(FourierSeries::constant(0.0));
  CHECK(kinetic.lagrangian({0.37, 0.0}, {2.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));

  const auto drift = LagrangianSpec::quadratic_drift(FourierSeries::sine(1));
  CHECK(drift.lagrangian({0.25, 0.0}, {1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
  const Vec g = drift.velocity_gradient({0.25, 0.0}, {1.0, 0.0});
  CHECK(std::abs(g[0]) < 1e-14);
  CHECK(std::abs(g[1]) < 1e-14);
}

TEST_CASE("legendre identity on random points") {
  FourierSeries V;
  V.modes.push_back({{1, 0}, 0.7, -0.2});
  V.modes.push_back({{2, 1}, 0.1, 0.3});
  FourierSeries b0 = FourierSeries::cosine(1, 0.4);
  FourierSeries b1 = FourierSeries::sine(2, -0.6);
  const auto mech = LagrangianSpec::mechanical(V);
  const auto drift = LagrangianSpec::quadratic_drift(b0, b1);

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ux(0.0, 1.0), up(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec x{ux(rng), ux(rng)};
    const Vec p{up(rng), up(rng)};
    for (const auto* lag : {&mech, &drift}) {
      const Vec v = lag->hamiltonian_gradient(x, p);
      const double gap = lag->lagrangian(x, v) + lag->hamiltonian(x, p) - dot(p, v);
      CHECK(std::abs(gap) <= 1e-10);
    }
  }
}

TEST_CASE("coupling families") {
  TorusGrid g(1, 32);
  const auto m = GridMeasure::uniform(g);

  CHECK(CouplingSpec::zero().eval({0.3, 0.0}, m) == 0.0);

  const auto sep = CouplingSpec::separable(FourierSeries::sine(1), FourierSeries::constant(1.0),
                                           {}, 1.0, 0.0);
  CHECK(sep.eval({0.25, 0.0}, m) == doctest::Approx(1.0).epsilon(1e-14));

  FourierSeries rho;
  rho.a0 = 1.0;
  rho.modes.push_back({{1, 0}, 1.0, 0.0});
  rho.modes.push_back({{2, 0}, 0.25, 0.1});
  const auto conv = CouplingSpec::convolution(rho, 1.0, 3.0, 20.0);
  const auto d0 = GridMeasure::dirac(g, 0);
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    const Vec x = g.node(i);
    CHECK(conv.eval(x, d0) == doctest::Approx(rho.eval(x)).epsilon(1e-13));
  }

  // eval_all agrees with pointwise eval bit for bit.
  const auto all = conv.eval_all(g, m);
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) CHECK(all[i] == conv.eval(g.node(i), m));
}

TEST_CASE("coupling lipschitz bound in d1") {
  TorusGrid g(1, 32);
  FourierSeries rho;
  rho.a0 = 1.0;
  rho.modes.push_back({{1, 0}, 1.0, 0.0});
  const double lip = 2.0 * M_PI;  // kappa * Lip(rho)
  const auto conv = CouplingSpec::convolution(rho, 1.0, 2.0, lip);

  const auto sepf = CouplingSpec::separable(FourierSeries::constant(1.0),
                                            FourierSeries::cosine(1), {}, 1.0, 2.0 * M_PI);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m1 = random_measure(g, rng, 4);
    const auto m2 = random_measure(g, rng, 4);
    const double d = wasserstein1(m1, m2);
    if (d < 1e-12) continue;
    for (std::int64_t i = 0; i < g.num_nodes(); i += 5) {
      const Vec x = g.node(i);
      CHECK(std::abs(conv.eval(x, m1) - conv.eval(x, m2)) <= conv.lip_f * d * (1.0 + 1e-6));
      CHECK(std::abs(sepf.eval(x, m1) - sepf.eval(x, m2)) <= sepf.lip_f * d * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("grid measure construction") {
  TorusGrid g(1, 8);
  CHECK_THROWS(GridMeasure(g, std::vector<double>(8, -1.0)));
  CHECK_THROWS(GridMeasure(g, std::vector<double>(8, 0.0)));
  CHECK_THROWS(GridMeasure(g, std::vector<double>(4, 1.0)));
  const auto m = GridMeasure(g, std::vector<double>(8, 3.0));
  CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(GridMeasure::dirac(g, 3).w[3] == 1.0);
}

TEST_CASE("circle wasserstein examples") {
  TorusGrid g(1, 40);
  const auto d_at = [&](double x) { return GridMeasure::dirac(g, std::lround(x * 40)); };

  CHECK(wasserstein1(d_at(0.0), d_at(0.4)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(wasserstein1(d_at(0.0), d_at(0.75)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wasserstein1(GridMeasure::uniform(g), GridMeasure::uniform(g)) == 0.0);

  std::vector<double> w(40, 0.0);
  w[0] = 0.5;
  w[20] = 0.5;
  const GridMeasure m1(g, std::move(w));
  CHECK(wasserstein1(m1, d_at(0.25)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("wasserstein metric properties") {
  std::mt19937_64 rng(4242);
  for (int dim : {1, 2}) {
    TorusGrid g(dim, dim == 1 ? 32 : 8);
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = random_measure(g, rng, 3);
      const auto b = random_measure(g, rng, 3);
      const auto c = random_measure(g, rng, 3);
      const double dab = wasserstein1(a, b);
      const double dba = wasserstein1(b, a);
      const double dac = wasserstein1(a, c);
      const double dcb = wasserstein1(c, b);
      CHECK(dab == doctest::Approx(dba).epsilon(1e-12));
      CHECK(dab <= dac + dcb + 1e-10);
      CHECK(wasserstein1(a, a) <= 1e-12);
    }
  }
}

TEST_CASE("planar wasserstein vs exhaustive transport oracle") {
  TorusGrid g(2, 4);
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    const auto m1 = random_measure(g, rng, 3);
    const auto m2 = random_measure(g, rng, 3);

    std::vector<std::int64_t> srcs, tgts;
    std::vector<double> supply, demand;
    for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
      const double diff = m1.w[i] - m2.w[i];
      if (diff > 1e-15) {
        srcs.push_back(i);
        supply.push_back(diff);
      } else if (diff < -1e-15) {
        tgts.push_back(i);
        demand.push_back(-diff);
      }
    }
    if (srcs.empty()) {
      CHECK(wasserstein1(m1, m2) <= 1e-12);
      continue;
    }
    if (srcs.size() > 4 || tgts.size() > 4) continue;
    std::vector<std::vector<double>> cost(srcs.size(), std::vector<double>(tgts.size()));
    for (std::size_t i = 0; i < srcs.size(); ++i)
      for (std::size_t j = 0; j < tgts.size(); ++j)
        cost[i][j] = l1_torus_distance(srcs[i], tgts[j], g);
    const double oracle = brute_force_w1(supply, demand, cost);
    CHECK(wasserstein1(m1, m2) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("wasserstein dimension mismatch rejected") {
  TorusGrid g1(1, 8), g2(2, 8);
  CHECK_THROWS(wasserstein1(GridMeasure::uniform(g1), GridMeasure::uniform(g2)));
}
