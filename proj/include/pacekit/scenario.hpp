#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pacekit/experiment.hpp"
#include "pacekit/metrics.hpp"
#include "pacekit/simulator.hpp"

namespace pacekit {

inline constexpr int kScenarioSchemaVersion = 1;

// Configuration problem with a location: "line 4, column 7" for syntax errors,
// a field path such as "campaigns[0].daily_goal" otherwise.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}

  [[nodiscard]] const std::string& location() const { return location_; }

 private:
  std::string location_;
};

struct CampaignEntry {
  CampaignSpec spec;
  CampaignHistory history;
  TrafficModel traffic;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::uint64_t seed = 0;
  PacingMode mode = PacingMode::Sff;
  int days = 1;
  Date start_date;
  SffParams params;
  SimOptions options;
  LiveHoursBasis live_hours_basis = LiveHoursBasis::TargetingStart;
  SummaryBuckets buckets;
  ArmConfig control = ArmConfig::traditional_ff(0.85);
  ArmConfig treatment = ArmConfig::smart(SffParams{});
  std::vector<CampaignEntry> campaigns;
  // Parameter name -> values, from the "sweep" block.
  std::map<std::string, std::vector<double>> sweep;
  std::optional<std::string> out_dir;
};

nlohmann::json parse_scenario_text(const std::string& text);
nlohmann::json load_scenario_json(const std::filesystem::path& path);

// Applies "a.b.0.c=value". The value is read as JSON when it parses, as a plain
// string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

Scenario parse_scenario(const nlohmann::json& doc);

PacingMode parse_mode(const std::string& text);

// Parameters a sweep may vary.
const std::vector<std::string>& sweepable_parameters();
void set_sweep_parameter(SffParams& params, const std::string& name, double value);

}  // namespace pacekit
