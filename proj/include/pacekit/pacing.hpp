#pragma once

#include "pacekit/model.hpp"

namespace pacekit {

// What a start fraction is a fraction of.
enum class StartBasis {
  TargetingWindow,  // targeting_start + fraction * targeting span
  CalendarDay,      // fraction * 1440, clamped into the targeting window
};

struct PlanOptions {
  StartBasis basis = StartBasis::TargetingWindow;
  // Moves the window earlier so that it ends (rather than starts) this many
  // minutes after the computed start. 0 means the window begins at the start.
  int window_lead_minutes = 0;
};

// Resolved per-day schedule: where fast finish starts and how long the ramp is.
struct DayPlan {
  double start_fraction = 0.0;
  int window_minutes = 0;
};

// Throttle rate is the probability that a request is blocked; 0 means ASAP.
struct PacingState {
  PacingPhase phase = PacingPhase::IntradayPacing;
  double throttle_rate = 0.0;
  double throttle_at_window_start = 0.0;
  Minute sff_start_minute = 0;
  Minute window_start_minute = 0;
  Minute window_end_minute = 0;
};

Minute start_minute(const CampaignSpec& spec, double fraction, StartBasis basis);

PacingState initial_state(const CampaignSpec& spec, const DayPlan& plan,
                          const PlanOptions& options = {});

struct FeedbackGains {
  double max_step = 0.1;   // per-minute relative change of the pass rate
  double min_pass = 0.01;
};

// Multiplicative feedback against a planned cumulative-spend fraction:
//
//   pass' = clamp(pass * clamp(planned / actual, 1 - step, 1 + step), min_pass, 1)
//
// with pass = 1 - prev_throttle. Returns 1 - pass'. No spend yet means fully open.
double intraday_throttle(double planned_cum_fraction, Money actual_cum_spend, Money daily_goal,
                         double prev_throttle, const FeedbackGains& gains = {});

// Intraday controller seam. Implementations must return a probability in [0, 1].
class IntradayController {
 public:
  virtual ~IntradayController() = default;
  virtual double next_throttle(Minute minute, const BillingLedger& ledger,
                               const CampaignSpec& spec, double prev_throttle) const = 0;
};

// Planned spend is uniform over the targeting window.
class FeedbackController final : public IntradayController {
 public:
  explicit FeedbackController(FeedbackGains gains = {}) : gains_(gains) {}

  double next_throttle(Minute minute, const BillingLedger& ledger, const CampaignSpec& spec,
                       double prev_throttle) const override;

  // Fraction of the goal planned to be spent by the end of `minute`.
  static double planned_fraction(const CampaignSpec& spec, Minute minute);

 private:
  FeedbackGains gains_;
};

// Advances the three-stage day by one minute. GoalReached is absorbing.
PacingState step_phase(const PacingState& state, Minute minute, const BillingLedger& ledger,
                       const CampaignSpec& spec, const IntradayController& controller);
PacingState step_phase(const PacingState& state, Minute minute, const BillingLedger& ledger,
                       const CampaignSpec& spec);

// Stops serving; used when a billed conversion crosses the goal mid-minute.
PacingState mark_goal_reached(PacingState state);

// True when the request may enter the auction.
bool admit_request(const PacingState& state, double u);

}  // namespace pacekit
