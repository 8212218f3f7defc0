// pacekit command-line entry point.
//
//   pacekit simulate  <scenario.json> [--seed N] [--out-dir DIR] [--mode M] [--days N] [--set k=v]...
//   pacekit abtest    <scenario.json> [same flags]
//   pacekit sweep     <scenario.json> [same flags] [--grid name=v1,v2,...]...
//
// Exit codes: 0 ok, 1 runtime error, 2 configuration error.

#include <iostream>

#include <CLI11.hpp>

#include "pacekit/commands.hpp"

namespace {

void add_common(CLI::App& cmd, pacekit::RunRequest& req) {
  cmd.add_option("scenario", req.scenario, "Scenario file (JSON)")->required();
  cmd.add_option("--seed", req.seed, "Override the master seed");
  cmd.add_option("--out-dir", req.out_dir, "Output directory (default: $PACEKIT_OUT_DIR or .)");
  cmd.add_option("--mode", req.mode, "sff, traditional_ff or asap");
  cmd.add_option("--days", req.days, "Number of simulated days");
  cmd.add_option("--set", req.overrides, "Override a scenario field, e.g. sff.min_start=0.9");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget pacing simulator with smart fast finish"};
  app.require_subcommand(1);

  pacekit::RunRequest request;
  auto* simulate = app.add_subcommand("simulate", "Simulate each campaign, write spend curves and metrics");
  auto* abtest = app.add_subcommand("abtest", "Budget-split experiment: traditional FF vs SFF");
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over SFF parameters");
  add_common(*simulate, request);
  add_common(*abtest, request);
  add_common(*sweep, request);
  sweep->add_option("--grid", request.grid, "Parameter grid, e.g. transition_window_minutes=0,60");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pacekit::kExitConfigError;
  }

  if (*simulate) return pacekit::cmd_simulate(request, std::cerr);
  if (*abtest) return pacekit::cmd_abtest(request, std::cerr);
  return pacekit::cmd_sweep(request, std::cerr);
}
