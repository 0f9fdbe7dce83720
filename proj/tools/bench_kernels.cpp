// Benchmark of the OpenMP kernels against their serial references, with an
// equality check on every output.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "tmfg/action.hpp"
#include "tmfg/reference.hpp"
#include "tmfg/weakkam.hpp"

using namespace tmfg;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  return a == b;  // bit-identical by design
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 512;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  TorusGrid grid(1, n);
  SolverConfig cfg;
  cfg.tau = 0.1;
  cfg.window_d = 3.0;
  const auto edges = build_edge_set(grid, cfg);
  const auto lag = LagrangianSpec::mechanical(FourierSeries::cosine(1));
  const auto cpl = CouplingSpec::zero();
  const auto m = GridMeasure::uniform(grid);

  std::printf("grid n=%d, edges=%lld, reps=%d\n", n, static_cast<long long>(edges->num_edges()),
              reps);

  ActionTable table;
  {
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) table = build_action_table(edges, lag, cpl, m, cfg.tau);
    auto t1 = Clock::now();
    std::vector<double> serial;
    for (int r = 0; r < reps; ++r) serial = ref::action_costs_serial(*edges, lag, cpl, m, cfg.tau);
    auto t2 = Clock::now();
    std::printf("action table   parallel %.4fs  serial %.4fs  match=%s\n", seconds(t0, t1) / reps,
                seconds(t1, t2) / reps, same(table.cost, serial) ? "yes" : "NO");
    if (!same(table.cost, serial)) return 1;
  }

  {
    std::vector<double> phi(grid.num_nodes());
    for (std::int64_t i = 0; i < grid.num_nodes(); ++i) phi[i] = std::sin(7.0 * i);
    std::vector<double> par, serial;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) par = lax_oleinik_apply(phi, table).first;
    auto t1 = Clock::now();
    for (int r = 0; r < reps; ++r) serial = ref::lax_oleinik_apply_serial(phi, table);
    auto t2 = Clock::now();
    std::printf("min-plus apply parallel %.4fs  serial %.4fs  match=%s\n", seconds(t0, t1) / reps,
                seconds(t1, t2) / reps, same(par, serial) ? "yes" : "NO");
    if (!same(par, serial)) return 1;
  }

  {
    double par = 0.0, serial = 0.0;
    auto t0 = Clock::now();
    par = effective_constant_karp(table).first;
    auto t1 = Clock::now();
    serial = ref::karp_min_mean_serial(table);
    auto t2 = Clock::now();
    std::printf("min mean cycle parallel %.4fs  serial %.4fs  match=%s\n", seconds(t0, t1),
                seconds(t1, t2), par == serial ? "yes" : "NO");
    if (par != serial) return 1;
  }
  return 0;
}
