#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pacekit/attribution.hpp"
#include "pacekit/model.hpp"
#include "pacekit/pacing.hpp"
#include "pacekit/sff_start.hpp"
#include "pacekit/traffic.hpp"

namespace pacekit {

enum class PacingMode {
  Sff,            // dynamic start + transition window
  TraditionalFF,  // static start, immediate drop to ASAP
  Asap,           // never throttled
};

const char* to_string(PacingMode mode);

struct SimOptions {
  SffOptions sff;
  PlanOptions plan;
  FeedbackGains controller;
  // Start fraction used by TraditionalFF.
  double static_start_fraction = 0.85;
  // Carry conversions due after midnight into the next day instead of billing
  // them in the end-of-day pass. Only the closed loop forwards them.
  bool spill_to_next_day = false;
  // Each minute's request count is divided by this (floor). The budget-split
  // harness uses 2.
  int traffic_share = 1;
  // Simulation date for SFF history lookups; defaults to the day after the
  // last history record.
  std::optional<Date> as_of;
};

struct SimulationResult {
  explicit SimulationResult(BillingLedger ledger) : final_ledger(std::move(ledger)) {}

  Minute first_minute = 0;
  DayPlan plan;
  // Recognized spend at the end of each targeting minute, then once more after
  // the end-of-day settlement pass.
  std::vector<Money> spend_curve;
  std::vector<PacingPhase> phase_trace;
  std::vector<double> throttle_trace;
  BillingLedger final_ledger;
  std::optional<Minute> goal_hit_minute;
  // Every converting click, in scheduling order.
  std::vector<ClickEvent> conversions;
  // Only with spill_to_next_day; due minutes are relative to the next midnight.
  std::vector<PendingAttribution> spilled;
  std::int64_t requests = 0;
  std::int64_t admitted = 0;
  std::int64_t wins = 0;
};

std::uint64_t day_seed(std::uint64_t seed, int day_index);

Date default_as_of(const CampaignHistory& history);

// Works out the start fraction and window for one day. SFF falls back to
// min_start when the history has nothing in the lookback window.
DayPlan resolve_plan(PacingMode mode, const CampaignSpec& spec, const SffParams& params,
                     const CampaignHistory& history, Date as_of, const SimOptions& options);

// Runs one day on a fixed plan. Per minute: settle due conversions, step the
// pacing phase, then for each request draw admission, auction and conversion.
// Finishes with the end-of-day settlement pass.
SimulationResult simulate_plan(const CampaignSpec& spec, const DayPlan& plan,
                               const TrafficModel& traffic, std::uint64_t seed,
                               const SimOptions& options = {},
                               const std::vector<PendingAttribution>& carried = {});

SimulationResult simulate_day(const CampaignSpec& spec, const SffParams& params,
                              const CampaignHistory& history, PacingMode mode,
                              const TrafficModel& traffic, std::uint64_t seed,
                              const SimOptions& options = {});

struct LoopDay {
  Date date;
  double candidate_fraction = 0.0;
  double start_fraction = 0.0;
  SimulationResult result;
};

// Day after day: overspend ratio -> candidate start -> later-only update ->
// simulate -> append the day's spend to the history. `history` is updated in
// place; day d runs with day_seed(seed, d).
std::vector<LoopDay> simulate_closed_loop(const CampaignSpec& spec, const SffParams& params,
                                          CampaignHistory& history, int days,
                                          const TrafficModel& traffic, std::uint64_t seed,
                                          const SimOptions& options = {},
                                          PacingMode mode = PacingMode::Sff);

}  // namespace pacekit
