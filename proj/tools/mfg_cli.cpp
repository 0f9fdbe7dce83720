#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tmfg/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stationary mean field game solver on the flat torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "problem config JSON")->required();
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--threads", threads, "worker thread count (default: all cores)");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { seed = v; }, "seed override");
  };

  CLI::App* solve = app.add_subcommand("solve", "run the fixed-point solve");
  add_common(solve, true);
  CLI::App* ladder = app.add_subcommand("ladder", "run the tau-ladder experiment");
  add_common(ladder, true);
  CLI::App* verify = app.add_subcommand("verify", "re-check certificates of a solve output");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tmfg::kInputError;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  if (solve->parsed()) return tmfg::run_solve(config_path, out_dir, seed);
  if (ladder->parsed()) return tmfg::run_ladder_cmd(config_path, out_dir, seed);
  return tmfg::run_verify(out_dir);
}
