#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmfg/mfg.hpp"

namespace tmfg {

// Raised on malformed configuration documents; message carries the JSON
// pointer / parse location.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  TorusGrid grid;
  LagrangianSpec lagrangian;
  CouplingSpec coupling;
  SolverConfig solver;
  std::vector<double> ladder_taus;  // empty unless a ladder block is present
  std::string coupling_name;        // tag echoed into summaries
};

nlohmann::json fourier_to_json(const FourierSeries& f);
FourierSeries fourier_from_json(const nlohmann::json& j, int dim);

ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ProblemConfig& pc);

ProblemContext make_context(const ProblemConfig& pc);

// FNV-1a over the canonical (key-sorted) dump; stable under key reordering.
std::string config_digest(const nlohmann::json& j);

// CSV formats. Measures: node,x0[,x1],weight. Potentials:
// node,x0[,x1],u,argmin_src. Edge measures: src,tgt,v0[,v1],weight.
void write_grid_measure_csv(const std::string& path, const GridMeasure& m);
std::vector<double> read_grid_measure_csv(const std::string& path, const TorusGrid& grid);

void write_potential_csv(const std::string& path, const TorusGrid& grid,
                         const std::vector<double>& u, const std::vector<std::int64_t>& argmin_src);
std::vector<double> read_potential_csv(const std::string& path, const TorusGrid& grid);

void write_edge_measure_csv(const std::string& path, const EdgeMeasure& mu);
EdgeMeasure read_edge_measure_csv(const std::string& path, std::shared_ptr<const EdgeSet> edges);

}  // namespace tmfg
