#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tmfg/io.hpp"

namespace tmfg {

// Exit-code contract shared by the CLI:
//   0 ok / 1 input error / 2 completed but not converged / 3 certificate failure
enum ExitCode { kOk = 0, kInputError = 1, kNotConverged = 2, kCertificateFailure = 3 };

// Run the fixed-point solve for a config file and write summary.json,
// m_star.csv, mu_star.csv, u.csv, config.json and manifest.json into out_dir.
int run_solve(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override = std::nullopt);

// Run the tau-ladder for a config with a ladder block; writes ladder.json,
// per-rung CSVs, a long-format metrics CSV and the manifest.
int run_ladder_cmd(const std::string& config_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override = std::nullopt);

// Re-load a solve output directory and re-run the certificate checks at the
// tolerances recorded in its summary.
int run_verify(const std::string& out_dir);

}  // namespace tmfg
