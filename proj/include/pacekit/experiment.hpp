#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pacekit/metrics.hpp"
#include "pacekit/simulator.hpp"

namespace pacekit {

// How one arm of a budget split paces its half of the budget.
struct ArmConfig {
  PacingMode mode = PacingMode::Sff;
  SffParams params;
  double static_start_fraction = 0.85;

  static ArmConfig traditional_ff(double start_fraction);
  static ArmConfig smart(const SffParams& params);
};

struct AbConfig {
  ArmConfig control = ArmConfig::traditional_ff(0.85);
  ArmConfig treatment = ArmConfig::smart(SffParams{});
  int days = 1;
  std::uint64_t seed = 0;
  // Shared simulation options; each arm overrides traffic_share and the static start.
  SimOptions options;
  SummaryBuckets buckets;
  LiveHoursBasis live_hours_basis = LiveHoursBasis::TargetingStart;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct AbRow {
  std::string campaign_id;
  CampaignMetrics control;
  CampaignMetrics treatment;
  double delta_live_hours = 0.0;    // treatment - control
  double delta_overdelivery = 0.0;  // treatment - control
};

struct AbFailure {
  std::string campaign_id;
  std::string message;
};

struct AbAggregates {
  std::size_t campaigns = 0;
  double mean_delta_live_hours = 0.0;
  double mean_delta_overdelivery = 0.0;
  MetricsSummary control;
  MetricsSummary treatment;
  DistributionSummary delta_live_hours;
};

struct AbResult {
  std::vector<AbRow> rows;
  std::vector<AbFailure> failures;
  // Absent when every campaign failed.
  std::optional<AbAggregates> aggregates;
};

// {control, treatment}; treatment gets total / 2 rounded down, control the rest.
std::pair<Money, Money> split_budget(Money total);

// Halves goal and cap for one arm.
CampaignSpec arm_spec(const CampaignSpec& spec, bool control);

AbAggregates aggregate_rows(std::span<const AbRow> rows, const SummaryBuckets& buckets);

// True when the stored aggregates are exactly what aggregate_rows recomputes.
bool aggregates_consistent(const AbResult& result, const SummaryBuckets& buckets);

// Budget-split experiment. Each campaign's goal and cap are halved between the
// arms, each minute's requests are paired off (one per arm, odd leftover
// unused) and both members of a pair see the same random draws. Multi-day runs
// use the closed loop per arm. `histories` may be empty; `traffic` holds one
// shared model or one per campaign. Failing campaigns land in `failures`.
AbResult run_budget_split(std::span<const CampaignSpec> campaigns,
                          std::span<const CampaignHistory> histories,
                          std::span<const TrafficModel> traffic, const AbConfig& config);

AbResult run_budget_split(std::span<const CampaignSpec> campaigns,
                          std::span<const CampaignHistory> histories, const SffParams& params,
                          double control_start_fraction, std::span<const TrafficModel> traffic,
                          int days, std::uint64_t seed);

struct SyntheticCampaign {
  CampaignSpec spec;
  CampaignHistory history;
  TrafficModel traffic;
};

// High-spend campaigns whose ASAP curve would exhaust the goal within 3-5 hours,
// each with 28 days of overspending history ending the day before `start`.
std::vector<SyntheticCampaign> synthetic_campaigns(int count, std::uint64_t seed, Date start);

}  // namespace pacekit
