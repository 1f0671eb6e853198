// SPDX-License-Identifier: Apache-2.0
// xlsched: Monte-Carlo sweeps and single-realization dumps.
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "xlsched/cli.hpp"
#include "xlsched/errors.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace xlsched;

  CLI::App app{"QoS-aware user scheduling simulator for XL-MIMO downlinks"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::size_t workers = cli::default_workers();
  bool full_scale = false;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV files");
  sweep->add_option("--config", config_path, "JSON config or run manifest")->required();
  sweep->add_option("--out", out_path, "metrics CSV path")->required();
  sweep->add_option("--workers", workers, "worker threads (default: $XLSCHED_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--full-scale", full_scale,
                  "fill absent fields with M=K=1000, S=1000 instead of 128/200/50");

  std::uint64_t realization = 0;
  auto* inspect = app.add_subcommand("inspect", "dump one realization as JSON");
  inspect->add_option("--config", config_path, "JSON config or run manifest")->required();
  inspect->add_option("--realization", realization, "realization index")->required();
  inspect->add_flag("--full-scale", full_scale, "use full-scale defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    const auto scale = full_scale ? cli::Scale::kFull : cli::Scale::kDesk;
    const ExperimentSpec spec = cli::parse_config(config_path, scale);
    if (*sweep) {
      const auto manifest = cli::cmd_sweep(spec, out_path, workers);
      for (const auto& p : manifest.outputs) std::cerr << "wrote " << p.string() << '\n';
    } else {
      std::cout << cli::cmd_inspect(spec, realization);
    }
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error in '" << e.field() << "': " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
