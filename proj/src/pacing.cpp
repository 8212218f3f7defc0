#include "pacekit/pacing.hpp"

#include <algorithm>
#include <cmath>

namespace pacekit {

Minute start_minute(const CampaignSpec& spec, double fraction, StartBasis basis) {
  if (basis == StartBasis::CalendarDay) {
    const auto m = static_cast<Minute>(std::lround(fraction * kMinutesPerDay));
    return std::clamp(m, spec.targeting_start, spec.targeting_end);
  }
  return spec.targeting_start +
         static_cast<Minute>(std::lround(fraction * spec.targeting_span()));
}

PacingState initial_state(const CampaignSpec& spec, const DayPlan& plan,
                          const PlanOptions& options) {
  if (plan.window_minutes < 0) throw InvalidSpec("transition_window_minutes", "must be >= 0");
  PacingState s;
  s.sff_start_minute = start_minute(spec, plan.start_fraction, options.basis);
  s.window_start_minute =
      std::max(spec.targeting_start, s.sff_start_minute - options.window_lead_minutes);
  s.window_end_minute = s.window_start_minute + plan.window_minutes;
  return s;
}

double intraday_throttle(double planned_cum_fraction, Money actual_cum_spend, Money daily_goal,
                         double prev_throttle, const FeedbackGains& gains) {
  if (actual_cum_spend <= Money::zero()) return 0.0;
  const double actual_fraction = actual_cum_spend / daily_goal;
  const double ratio =
      std::clamp(planned_cum_fraction / actual_fraction, 1.0 - gains.max_step, 1.0 + gains.max_step);
  const double pass = std::clamp((1.0 - prev_throttle) * ratio, gains.min_pass, 1.0);
  return 1.0 - pass;
}

double FeedbackController::planned_fraction(const CampaignSpec& spec, Minute minute) {
  const double elapsed = minute - spec.targeting_start + 1;
  return std::clamp(elapsed / spec.targeting_span(), 0.0, 1.0);
}

double FeedbackController::next_throttle(Minute minute, const BillingLedger& ledger,
                                         const CampaignSpec& spec, double prev_throttle) const {
  return intraday_throttle(planned_fraction(spec, minute), ledger.recognized_spend(),
                           spec.daily_goal, prev_throttle, gains_);
}

PacingState step_phase(const PacingState& state, Minute minute, const BillingLedger& ledger,
                       const CampaignSpec& spec, const IntradayController& controller) {
  if (state.phase == PacingPhase::GoalReached || ledger.recognized_spend() >= spec.daily_goal) {
    return mark_goal_reached(state);
  }
  PacingState next = state;
  if (minute < state.window_start_minute) {
    next.phase = PacingPhase::IntradayPacing;
    next.throttle_rate = controller.next_throttle(minute, ledger, spec, state.throttle_rate);
  } else if (minute < state.window_end_minute) {
    if (state.phase == PacingPhase::IntradayPacing) {
      next.throttle_at_window_start = state.throttle_rate;
    }
    next.phase = PacingPhase::TransitionWindow;
    const int window = state.window_end_minute - state.window_start_minute;
    const int remaining = state.window_end_minute - minute;
    next.throttle_rate = next.throttle_at_window_start * remaining / window;
  } else {
    next.phase = PacingPhase::FastFinish;
    next.throttle_rate = 0.0;
  }
  return next;
}

PacingState step_phase(const PacingState& state, Minute minute, const BillingLedger& ledger,
                       const CampaignSpec& spec) {
  static const FeedbackController kDefault;
  return step_phase(state, minute, ledger, spec, kDefault);
}

PacingState mark_goal_reached(PacingState state) {
  state.phase = PacingPhase::GoalReached;
  state.throttle_rate = 1.0;
  return state;
}

bool admit_request(const PacingState& state, double u) {
  return state.phase != PacingPhase::GoalReached && u >= state.throttle_rate;
}

}  // namespace pacekit
