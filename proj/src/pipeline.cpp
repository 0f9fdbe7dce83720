#include "tmfg/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tmfg/ladder.hpp"

namespace tmfg {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "mfg 1.0.0";

// Certificate tolerances recorded into every summary and re-checked by verify.
constexpr double kSubactionTol = 1e-9;
constexpr double kHolonomyTol = 1e-10;
constexpr double kContactTol = 1e-8;
constexpr double kFixedPointTol = 1e-8;
constexpr double kMassTol = 1e-8;

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

void write_manifest(const fs::path& dir, const std::string& digest, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  json m;
  m["config_digest"] = digest;
  m["tool_version"] = kToolVersion;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  m["created_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  m["outputs"] = outputs;
  m["seed"] = seed;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

struct CertReport {
  json block = json::object();
  std::string first_failure;

  void add(const std::string& name, double value, double tol) {
    const bool pass = value <= tol;
    block[name] = {{"value", value}, {"tol", tol}, {"pass", pass}};
    if (!pass && first_failure.empty()) first_failure = name;
  }
};

// Shared certificate battery over an in-memory (or re-loaded) solution.
CertReport run_certificates(const ActionTable& table, const std::vector<double>& u,
                            double abar, const EdgeMeasure& mu, double raw_mass) {
  CertReport rep;
  const EdgeSet& es = *table.edges;

  WeakKamSolution shim;
  shim.u = u;
  shim.abar = abar;
  rep.add("subaction", verify_subaction(shim, table), kSubactionTol);

  auto [tu, arg] = lax_oleinik_apply(u, table);
  double fp = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    fp = std::max(fp, std::abs(tu[i] - u[i] - abar));
  rep.add("fixed_point", fp, kFixedPointTol);

  rep.add("holonomy", holonomy_residual(mu), kHolonomyTol);
  rep.add("measure_mass", std::abs(mu.mass() - 1.0), kMassTol);
  rep.add("density_mass", std::abs(raw_mass - 1.0), kMassTol);

  // Contact-set inclusion: every supported edge must be tight for (u, abar).
  double worst_gap = 0.0;
  for (const auto& [e, w] : mu.entries) {
    if (w == 0.0) continue;
    const double gap = table.cost[e] - abar + u[es.src[e]] - u[es.tgt[e]];
    worst_gap = std::max(worst_gap, std::abs(gap));
  }
  rep.add("contact_set", worst_gap, kContactTol);

  rep.add("measure_action", std::abs(measure_action(mu, table) - abar / table.tau) * table.tau,
          kContactTol);
  return rep;
}

json rung_to_json(const LadderRung& r) {
  json j;
  j["tau"] = r.tau;
  j["failed"] = r.failed;
  if (r.failed) j["fail_reason"] = r.fail_reason;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["lbar"] = r.lbar;
  j["c_gap"] = r.c_gap;
  j["u_sup_diff"] = r.u_sup_diff;
  j["d1_prev"] = r.d1_prev;
  j["residual_HJ"] = r.residual_hj;
  j["residual_continuity"] = r.residual_continuity;
  j["closedness"] = r.closedness;
  j["semigroup_defect"] = r.semigroup_defect;
  j["lip_u"] = r.lip_u;
  j["boundary_hit"] = r.boundary_hit;
  return j;
}

}  // namespace

int run_solve(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override) {
  ProblemConfig pc;
  try {
    pc = load_config(config_path);
    if (seed_override) pc.solver.rng_seed = *seed_override;
    fs::create_directories(out_dir);
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kInputError;
  }

  try {
    const fs::path dir(out_dir);
    ProblemContext ctx = make_context(pc);
    const FixedPointResult res = solve_fixed_point(GridMeasure::uniform(pc.grid), ctx);
    const ResidualReport rr = mfg_residuals(res, ctx, pc.solver.fourier_test_order);

    const ActionTable table = build_action_table(ctx.edge_set(), ctx.lagrangian, ctx.coupling,
                                                 res.m_star, pc.solver.tau);
    CertReport certs =
        run_certificates(table, res.wk.u, res.wk.abar, res.mu_star, res.m_star.mass());

    const json cfg_json = config_to_json(pc);
    const std::string digest = config_digest(cfg_json);

    json s;
    s["tau"] = pc.solver.tau;
    s["n"] = pc.grid.n;
    s["dim"] = pc.grid.dim;
    s["coupling"] = pc.coupling_name;
    s["iterations"] = res.iterations;
    s["converged"] = res.converged;
    s["c_est"] = res.c_est;
    s["lbar"] = res.wk.lbar;
    s["abar"] = res.wk.abar;
    s["residual_HJ"] = rr.hj;
    s["residual_continuity"] = rr.continuity;
    s["residual_continuity_edge"] = rr.continuity_edge;
    s["d1_final"] = res.d1_history.empty() ? 0.0 : res.d1_history.back();
    s["d1_history"] = res.d1_history;
    s["mass_defect"] = rr.mass_defect;
    s["boundary_hit"] = res.wk.window_boundary_hit;
    s["certificates"] = certs.block;
    s["seed"] = pc.solver.rng_seed;
    s["config_digest"] = digest;

    write_text(dir / "summary.json", s.dump(2) + "\n");
    write_text(dir / "config.json", cfg_json.dump(2) + "\n");
    write_grid_measure_csv((dir / "m_star.csv").string(), res.m_star);
    write_edge_measure_csv((dir / "mu_star.csv").string(), res.mu_star);
    write_potential_csv((dir / "u.csv").string(), pc.grid, res.wk.u, res.wk.argmin_edge.empty()
                            ? std::vector<std::int64_t>(pc.grid.num_nodes(), -1)
                            : [&] {
                                std::vector<std::int64_t> srcs(pc.grid.num_nodes());
                                for (std::int64_t i = 0; i < pc.grid.num_nodes(); ++i)
                                  srcs[i] = table.edges->src[res.wk.argmin_edge[i]];
                                return srcs;
                              }());
    write_manifest(dir, digest, pc.solver.rng_seed,
                   {"summary.json", "config.json", "m_star.csv", "mu_star.csv", "u.csv"});

    if (!certs.first_failure.empty()) {
      std::cerr << "certificate failed: " << certs.first_failure << "\n";
      return kCertificateFailure;
    }
    return res.converged ? kOk : kNotConverged;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kCertificateFailure;
  }
}

int run_ladder_cmd(const std::string& config_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override) {
  ProblemConfig pc;
  try {
    pc = load_config(config_path);
    if (seed_override) pc.solver.rng_seed = *seed_override;
    if (pc.ladder_taus.empty())
      throw ConfigError("config error at ladder: ladder block with taus is required");
    fs::create_directories(out_dir);
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kInputError;
  }

  try {
    const fs::path dir(out_dir);
    const LadderReport rep = run_ladder(make_context(pc), pc.ladder_taus);

    const json cfg_json = config_to_json(pc);
    const std::string digest = config_digest(cfg_json);

    if (!rep.resolution_warning.empty())
      std::cerr << "warning: " << rep.resolution_warning << "\n";

    json lj;
    lj["c_ref"] = rep.c_ref;
    lj["c_ref_analytic"] = rep.c_ref_analytic;
    lj["c_gap_slope"] = rep.c_gap_slope ? json(*rep.c_gap_slope) : json();
    lj["u_diff_slope"] = rep.u_diff_slope ? json(*rep.u_diff_slope) : json();
    lj["resolution_warning"] = rep.resolution_warning;
    lj["rungs"] = json::array();
    for (const auto& r : rep.rungs) lj["rungs"].push_back(rung_to_json(r));
    lj["coupling"] = pc.coupling_name;
    lj["n"] = pc.grid.n;
    lj["dim"] = pc.grid.dim;
    lj["seed"] = pc.solver.rng_seed;
    lj["config_digest"] = digest;
    write_text(dir / "ladder.json", lj.dump(2) + "\n");
    write_text(dir / "config.json", cfg_json.dump(2) + "\n");

    std::vector<std::string> outputs = {"ladder.json", "config.json", "metrics.csv"};

    // Plotting-ready long format: one (rung, metric, value) row per scalar.
    {
      std::ofstream mc(dir / "metrics.csv");
      mc << "rung,tau,metric,value\n";
      char buf[128];
      auto row = [&](std::size_t i, double tau, const char* name, double v) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%s,%.17g\n", i, tau, name, v);
        mc << buf;
      };
      for (std::size_t i = 0; i < rep.rungs.size(); ++i) {
        const auto& r = rep.rungs[i];
        row(i, r.tau, "lbar", r.lbar);
        row(i, r.tau, "c_gap", r.c_gap);
        row(i, r.tau, "u_sup_diff", r.u_sup_diff);
        row(i, r.tau, "d1_prev", r.d1_prev);
        row(i, r.tau, "residual_HJ", r.residual_hj);
        row(i, r.tau, "residual_continuity", r.residual_continuity);
        row(i, r.tau, "closedness", r.closedness);
        row(i, r.tau, "semigroup_defect", r.semigroup_defect);
        row(i, r.tau, "lip_u", r.lip_u);
        row(i, r.tau, "iterations", static_cast<double>(r.iterations));
        row(i, r.tau, "converged", r.converged ? 1.0 : 0.0);
        row(i, r.tau, "failed", r.failed ? 1.0 : 0.0);
      }
    }

    for (std::size_t i = 0; i < rep.rungs.size(); ++i) {
      const auto& r = rep.rungs[i];
      if (!r.result) continue;
      const std::string tag = "rung_" + std::to_string(i);
      write_grid_measure_csv((dir / (tag + "_m.csv")).string(), r.result->m_star);
      write_edge_measure_csv((dir / (tag + "_mu.csv")).string(), r.result->mu_star);
      const auto& es = *r.result->mu_star.edges;
      std::vector<std::int64_t> srcs(pc.grid.num_nodes());
      for (std::int64_t y = 0; y < pc.grid.num_nodes(); ++y)
        srcs[y] = es.src[r.result->wk.argmin_edge[y]];
      write_potential_csv((dir / (tag + "_u.csv")).string(), pc.grid, r.result->wk.u, srcs);
      outputs.push_back(tag + "_m.csv");
      outputs.push_back(tag + "_mu.csv");
      outputs.push_back(tag + "_u.csv");
    }
    write_manifest(dir, digest, pc.solver.rng_seed, outputs);

    for (const auto& r : rep.rungs)
      if (r.failed) {
        std::cerr << "ladder rung tau=" << r.tau << " failed: " << r.fail_reason << "\n";
        return kNotConverged;
      }
    return kOk;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kCertificateFailure;
  }
}

int run_verify(const std::string& out_dir) {
  const fs::path dir(out_dir);
  json summary;
  ProblemConfig pc;
  try {
    for (const char* f : {"summary.json", "config.json", "m_star.csv", "mu_star.csv", "u.csv"})
      if (!fs::exists(dir / f))
        throw ConfigError(std::string("missing output file: ") + f);
    {
      std::ifstream in(dir / "summary.json");
      summary = json::parse(in);
    }
    pc = load_config((dir / "config.json").string());
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kInputError;
  }

  try {
    ProblemContext ctx = make_context(pc);
    const auto edges = ctx.edge_set();

    const std::vector<double> raw_w = read_grid_measure_csv((dir / "m_star.csv").string(), pc.grid);
    double raw_mass = 0.0;
    for (double w : raw_w) raw_mass += w;
    const GridMeasure m(pc.grid, raw_w);
    const std::vector<double> u = read_potential_csv((dir / "u.csv").string(), pc.grid);
    const EdgeMeasure mu = read_edge_measure_csv((dir / "mu_star.csv").string(), edges);

    const ActionTable table =
        build_action_table(edges, ctx.lagrangian, ctx.coupling, m, pc.solver.tau);
    const double abar = summary.at("abar").get<double>();
    CertReport certs = run_certificates(table, u, abar, mu, raw_mass);

    if (!certs.first_failure.empty()) {
      std::cerr << "certificate failed: " << certs.first_failure << "\n";
      return kCertificateFailure;
    }
    std::cout << "all certificates passed\n";
    return kOk;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kCertificateFailure;
  }
}

}  // namespace tmfg
