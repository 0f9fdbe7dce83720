#include "tmfg/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tmfg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + "/" + key, "missing required field");
  return *it;
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

double num_or(const json& j, const char* key, double dflt, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? dflt : num(*it, where + "/" + key);
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json fourier_to_json(const FourierSeries& f) {
  json j;
  j["a0"] = f.a0;
  j["modes"] = json::array();
  for (const auto& m : f.modes)
    j["modes"].push_back({{"k", {m.k[0], m.k[1]}}, {"a", m.a}, {"b", m.b}});
  return j;
}

FourierSeries fourier_from_json(const json& j, int dim) {
  const std::string where = "fourier series";
  FourierSeries f;
  f.a0 = num_or(j, "a0", 0.0, where);
  if (auto it = j.find("modes"); it != j.end()) {
    if (!it->is_array()) fail(where + "/modes", "expected an array");
    for (const auto& mj : *it) {
      FourierSeries::Mode m;
      const json& kj = require(mj, "k", where + "/modes");
      if (!kj.is_array() || kj.empty() || kj.size() > 2)
        fail(where + "/modes/k", "expected an array of 1 or 2 integers");
      m.k[0] = static_cast<int>(integer(kj[0], where + "/modes/k"));
      m.k[1] = kj.size() == 2 ? static_cast<int>(integer(kj[1], where + "/modes/k")) : 0;
      if (dim == 1 && m.k[1] != 0)
        fail(where + "/modes/k", "second component must be 0 in dimension 1");
      m.a = num_or(mj, "a", 0.0, where + "/modes");
      m.b = num_or(mj, "b", 0.0, where + "/modes");
      if (m.k[0] == 0 && m.k[1] == 0)
        fail(where + "/modes/k", "use a0 for the constant mode");
      f.modes.push_back(m);
    }
  }
  return f;
}

ProblemConfig parse_config(const json& j) {
  ProblemConfig pc;

  const json& gj = require(j, "grid", "");
  const int dim = static_cast<int>(integer(require(gj, "dim", "grid"), "grid/dim"));
  const int n = static_cast<int>(integer(require(gj, "n", "grid"), "grid/n"));
  try {
    pc.grid = TorusGrid(dim, n);
  } catch (const std::exception& ex) {
    fail("grid", ex.what());
  }

  const json& lj = require(j, "lagrangian", "");
  const std::string lfam = text(require(lj, "family", "lagrangian"), "lagrangian/family");
  if (lfam == "mechanical") {
    pc.lagrangian =
        LagrangianSpec::mechanical(fourier_from_json(require(lj, "potential", "lagrangian"), dim));
  } else if (lfam == "quadratic_drift") {
    const json& dj = require(lj, "drift", "lagrangian");
    if (!dj.is_array() || static_cast<int>(dj.size()) != dim)
      fail("lagrangian/drift", "expected an array of dim series");
    pc.lagrangian = LagrangianSpec::quadratic_drift(
        fourier_from_json(dj[0], dim),
        dim == 2 ? fourier_from_json(dj[1], dim) : FourierSeries{});
  } else {
    fail("lagrangian/family", "unknown family '" + lfam + "'");
  }

  const json& cj = require(j, "coupling", "");
  const std::string cfam = text(require(cj, "family", "coupling"), "coupling/family");
  if (cfam == "zero") {
    pc.coupling = CouplingSpec::zero();
  } else if (cfam == "separable") {
    CouplingSpec::ScalarMap g;
    if (auto it = cj.find("map"); it != cj.end()) {
      const std::string kind = text(require(*it, "kind", "coupling/map"), "coupling/map/kind");
      if (kind == "identity") {
        g.kind = CouplingSpec::ScalarMap::Kind::Identity;
      } else if (kind == "clamp_affine") {
        g.kind = CouplingSpec::ScalarMap::Kind::ClampAffine;
        g.alpha = num_or(*it, "alpha", 1.0, "coupling/map");
        g.beta = num_or(*it, "beta", 0.0, "coupling/map");
        g.lo = num_or(*it, "lo", 0.0, "coupling/map");
        g.hi = num_or(*it, "hi", 1.0, "coupling/map");
      } else {
        fail("coupling/map/kind", "unknown kind '" + kind + "'");
      }
    }
    pc.coupling = CouplingSpec::separable(
        fourier_from_json(require(cj, "f", "coupling"), dim),
        fourier_from_json(require(cj, "moment", "coupling"), dim), g,
        num(require(cj, "f_inf", "coupling"), "coupling/f_inf"),
        num(require(cj, "lip_f", "coupling"), "coupling/lip_f"));
  } else if (cfam == "convolution") {
    pc.coupling = CouplingSpec::convolution(
        fourier_from_json(require(cj, "kernel", "coupling"), dim),
        num(require(cj, "kappa", "coupling"), "coupling/kappa"),
        num(require(cj, "f_inf", "coupling"), "coupling/f_inf"),
        num(require(cj, "lip_f", "coupling"), "coupling/lip_f"));
  } else {
    fail("coupling/family", "unknown family '" + cfam + "'");
  }
  pc.coupling_name = cfam;
  if (auto it = cj.find("name"); it != cj.end()) pc.coupling_name = text(*it, "coupling/name");

  const json& sj = require(j, "solver", "");
  pc.solver.tau = num(require(sj, "tau", "solver"), "solver/tau");
  pc.solver.window_d = num_or(sj, "window_d", 3.0, "solver");
  pc.solver.anchor_node = integer(require(sj, "anchor_node", "solver"), "solver/anchor_node");
  pc.solver.damping_theta = num_or(sj, "damping_theta", 0.5, "solver");
  pc.solver.fp_tol = num_or(sj, "fp_tol", 1e-4, "solver");
  pc.solver.wk_tol = num_or(sj, "wk_tol", 1e-9, "solver");
  pc.solver.max_iters = static_cast<int>(integer(require(sj, "max_iters", "solver"), "solver/max_iters"));
  if (auto it = sj.find("rng_seed"); it != sj.end())
    pc.solver.rng_seed = static_cast<std::uint64_t>(integer(*it, "solver/rng_seed"));
  pc.solver.fourier_test_order =
      static_cast<int>(num_or(sj, "fourier_test_order", 8.0, "solver"));
  try {
    pc.solver.validate();
  } catch (const std::exception& ex) {
    fail("solver", ex.what());
  }
  if (pc.solver.anchor_node < 0 || pc.solver.anchor_node >= pc.grid.num_nodes())
    fail("solver/anchor_node", "out of range");
  if (pc.solver.tau * pc.solver.window_d < 2.0 * pc.grid.h)
    fail("solver", "window too small: tau * window_d must be >= 2h = " + fmt(2.0 * pc.grid.h));

  if (auto it = j.find("ladder"); it != j.end()) {
    const json& tj = require(*it, "taus", "ladder");
    if (!tj.is_array() || tj.empty()) fail("ladder/taus", "expected a non-empty array");
    for (const auto& t : tj) pc.ladder_taus.push_back(num(t, "ladder/taus"));
    for (std::size_t i = 1; i < pc.ladder_taus.size(); ++i)
      if (!(pc.ladder_taus[i] < pc.ladder_taus[i - 1]))
        fail("ladder/taus", "must be strictly decreasing");
    if (pc.ladder_taus.back() * pc.solver.window_d < 2.0 * pc.grid.h)
      fail("ladder/taus", "finest rung violates tau * window_d >= 2h");
  }
  return pc;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config parse failure: ") + ex.what());
  }
  return parse_config(j);
}

json config_to_json(const ProblemConfig& pc) {
  json j;
  j["grid"] = {{"dim", pc.grid.dim}, {"n", pc.grid.n}};

  json lj;
  if (pc.lagrangian.family == LagrangianSpec::Family::Mechanical) {
    lj["family"] = "mechanical";
    lj["potential"] = fourier_to_json(pc.lagrangian.potential);
  } else {
    lj["family"] = "quadratic_drift";
    lj["drift"] = json::array({fourier_to_json(pc.lagrangian.drift[0])});
    if (pc.grid.dim == 2) lj["drift"].push_back(fourier_to_json(pc.lagrangian.drift[1]));
  }
  j["lagrangian"] = lj;

  json cj;
  switch (pc.coupling.family) {
    case CouplingSpec::Family::Zero:
      cj["family"] = "zero";
      break;
    case CouplingSpec::Family::Separable: {
      cj["family"] = "separable";
      cj["f"] = fourier_to_json(pc.coupling.f);
      cj["moment"] = fourier_to_json(pc.coupling.moment);
      json mj;
      if (pc.coupling.g.kind == CouplingSpec::ScalarMap::Kind::Identity) {
        mj["kind"] = "identity";
      } else {
        mj = {{"kind", "clamp_affine"},
              {"alpha", pc.coupling.g.alpha},
              {"beta", pc.coupling.g.beta},
              {"lo", pc.coupling.g.lo},
              {"hi", pc.coupling.g.hi}};
      }
      cj["map"] = mj;
      cj["f_inf"] = pc.coupling.f_inf;
      cj["lip_f"] = pc.coupling.lip_f;
      break;
    }
    case CouplingSpec::Family::Convolution:
      cj["family"] = "convolution";
      cj["kernel"] = fourier_to_json(pc.coupling.kernel);
      cj["kappa"] = pc.coupling.kappa;
      cj["f_inf"] = pc.coupling.f_inf;
      cj["lip_f"] = pc.coupling.lip_f;
      break;
  }
  if (pc.coupling_name != cj["family"].get<std::string>()) cj["name"] = pc.coupling_name;
  j["coupling"] = cj;

  j["solver"] = {{"tau", pc.solver.tau},
                 {"window_d", pc.solver.window_d},
                 {"anchor_node", pc.solver.anchor_node},
                 {"damping_theta", pc.solver.damping_theta},
                 {"fp_tol", pc.solver.fp_tol},
                 {"wk_tol", pc.solver.wk_tol},
                 {"max_iters", pc.solver.max_iters},
                 {"rng_seed", pc.solver.rng_seed},
                 {"fourier_test_order", pc.solver.fourier_test_order}};
  if (!pc.ladder_taus.empty()) j["ladder"] = {{"taus", pc.ladder_taus}};
  return j;
}

ProblemContext make_context(const ProblemConfig& pc) {
  ProblemContext ctx;
  ctx.grid = pc.grid;
  ctx.lagrangian = pc.lagrangian;
  ctx.coupling = pc.coupling;
  ctx.cfg = pc.solver;
  return ctx;
}

std::string config_digest(const json& j) {
  const std::string dump = j.dump();  // keys already sorted by the container
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_grid_measure_csv(const std::string& path, const GridMeasure& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << (m.grid.dim == 1 ? "node,x0,weight\n" : "node,x0,x1,weight\n");
  for (std::int64_t i = 0; i < m.grid.num_nodes(); ++i) {
    const Vec x = m.grid.node(i);
    out << i << ',' << fmt(x[0]);
    if (m.grid.dim == 2) out << ',' << fmt(x[1]);
    out << ',' << fmt(m.w[i]) << '\n';
  }
}

namespace {

// Shared CSV scaffolding: skips the header, returns comma-split fields.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::vector<double> read_grid_measure_csv(const std::string& path, const TorusGrid& grid) {
  const auto rows = read_csv_rows(path);
  const std::size_t ncols = grid.dim == 1 ? 3 : 4;
  std::vector<double> w(grid.num_nodes(), 0.0);
  std::vector<bool> seen(grid.num_nodes(), false);
  for (const auto& r : rows) {
    if (r.size() != ncols) throw std::runtime_error(path + ": bad column count");
    const std::int64_t node = std::stoll(r[0]);
    if (node < 0 || node >= grid.num_nodes() || seen[node])
      throw std::runtime_error(path + ": bad or duplicate node index");
    seen[node] = true;
    w[node] = std::stod(r.back());
  }
  for (std::int64_t i = 0; i < grid.num_nodes(); ++i)
    if (!seen[i]) throw std::runtime_error(path + ": missing node row");
  return w;
}

void write_potential_csv(const std::string& path, const TorusGrid& grid,
                         const std::vector<double>& u,
                         const std::vector<std::int64_t>& argmin_src) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << (grid.dim == 1 ? "node,x0,u,argmin_src\n" : "node,x0,x1,u,argmin_src\n");
  for (std::int64_t i = 0; i < grid.num_nodes(); ++i) {
    const Vec x = grid.node(i);
    out << i << ',' << fmt(x[0]);
    if (grid.dim == 2) out << ',' << fmt(x[1]);
    out << ',' << fmt(u[i]) << ',' << argmin_src[i] << '\n';
  }
}

std::vector<double> read_potential_csv(const std::string& path, const TorusGrid& grid) {
  const auto rows = read_csv_rows(path);
  const std::size_t ncols = grid.dim == 1 ? 4 : 5;
  std::vector<double> u(grid.num_nodes(), 0.0);
  std::vector<bool> seen(grid.num_nodes(), false);
  for (const auto& r : rows) {
    if (r.size() != ncols) throw std::runtime_error(path + ": bad column count");
    const std::int64_t node = std::stoll(r[0]);
    if (node < 0 || node >= grid.num_nodes() || seen[node])
      throw std::runtime_error(path + ": bad or duplicate node index");
    seen[node] = true;
    u[node] = std::stod(r[r.size() - 2]);
  }
  for (std::int64_t i = 0; i < grid.num_nodes(); ++i)
    if (!seen[i]) throw std::runtime_error(path + ": missing node row");
  return u;
}

void write_edge_measure_csv(const std::string& path, const EdgeMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const EdgeSet& es = *mu.edges;
  out << (es.grid.dim == 1 ? "src,tgt,v0,weight\n" : "src,tgt,v0,v1,weight\n");
  for (const auto& [e, w] : mu.entries) {
    out << es.src[e] << ',' << es.tgt[e] << ',' << fmt(es.vel[e][0]);
    if (es.grid.dim == 2) out << ',' << fmt(es.vel[e][1]);
    out << ',' << fmt(w) << '\n';
  }
}

EdgeMeasure read_edge_measure_csv(const std::string& path,
                                  std::shared_ptr<const EdgeSet> edges) {
  const auto rows = read_csv_rows(path);
  const std::size_t ncols = edges->grid.dim == 1 ? 4 : 5;
  EdgeMeasure mu;
  mu.edges = edges;
  for (const auto& r : rows) {
    if (r.size() != ncols) throw std::runtime_error(path + ": bad column count");
    const std::int64_t e = edges->find_edge(std::stoll(r[0]), std::stoll(r[1]));
    if (e < 0) throw std::runtime_error(path + ": edge not in edge set");
    mu.entries.push_back({e, std::stod(r.back())});
  }
  std::sort(mu.entries.begin(), mu.entries.end());
  return mu;
}

}  // namespace tmfg
