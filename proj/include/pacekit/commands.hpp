#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pacekit/scenario.hpp"

namespace pacekit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

// Everything a subcommand needs besides the scenario contents.
struct RunRequest {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> mode;
  std::optional<int> days;
  std::vector<std::string> overrides;  // key=value
  std::vector<std::string> grid;       // name=v1,v2,... (sweep only)
};

// Output directory: --out-dir, then the scenario's output.out_dir, then
// $PACEKIT_OUT_DIR, then the working directory.
std::filesystem::path resolve_out_dir(const RunRequest& request, const Scenario& scenario);

// Reads, overrides and validates the scenario. Throws ScenarioError.
Scenario load_scenario(const RunRequest& request);

// Writes spend_curve.csv and metrics.json.
int cmd_simulate(const RunRequest& request, std::ostream& log);
// Writes abtest.csv and summary.json.
int cmd_abtest(const RunRequest& request, std::ostream& log);
// Writes sweep.csv.
int cmd_sweep(const RunRequest& request, std::ostream& log);

// Replaces `path` with `contents` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// One RFC 4180 record (CRLF terminated), quoting fields that need it.
std::string csv_row(const std::vector<std::string>& fields);

// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace pacekit
