#include <doctest.h>

#include "pacekit/pacing.hpp"
#include "pacekit/random.hpp"

using namespace pacekit;

namespace {

CampaignSpec day_spec() {
  CampaignSpec s;
  s.campaign_id = "p";
  s.daily_goal = Money::from_units(100);
  s.billing_cap = Money::from_units(120);
  s.fee_per_conversion = Money::from_units(1);
  s.conversion_rate = 0.1;
  return s;
}

PacingState window_state(double p0, Minute start, int window) {
  PacingState s;
  s.phase = PacingPhase::IntradayPacing;
  s.throttle_rate = p0;
  s.sff_start_minute = start;
  s.window_start_minute = start;
  s.window_end_minute = start + window;
  return s;
}

}  // namespace

TEST_CASE("intraday throttle examples") {
  const Money goal = Money::from_units(100);
  CHECK(intraday_throttle(0.5, Money::from_units(50), goal, 0.3) == doctest::Approx(0.3));
  CHECK(intraday_throttle(0.25, Money::from_units(50), goal, 0.5) == doctest::Approx(0.55));
  CHECK(intraday_throttle(0.01, Money::zero(), goal, 0.7) == 0.0);
  // Far behind plan opens up by at most one step.
  CHECK(intraday_throttle(0.9, Money::from_units(1), goal, 0.5) == doctest::Approx(0.45));
  // Pass rate never drops below the floor.
  CHECK(intraday_throttle(0.01, Money::from_units(90), goal, 0.995) == doctest::Approx(0.99));
}

TEST_CASE("start minute bases") {
  auto s = day_spec();
  s.targeting_start = 480;
  CHECK(start_minute(s, 0.85, StartBasis::TargetingWindow) == 480 + 816);
  CHECK(start_minute(s, 0.85, StartBasis::CalendarDay) == 1224);
  CHECK(start_minute(s, 0.2, StartBasis::CalendarDay) == 480);

  const auto st = initial_state(s, {0.85, 60}, {StartBasis::TargetingWindow, 60});
  CHECK(st.window_start_minute == 1236);
  CHECK(st.window_end_minute == 1296);
}

TEST_CASE("transition window ramp") {
  const auto spec = day_spec();
  const BillingLedger ledger(spec.daily_goal, spec.billing_cap);
  auto s = window_state(0.60, 1200, 60);
  for (Minute m = 1200; m <= 1230; ++m) s = step_phase(s, m, ledger, spec);
  CHECK(s.phase == PacingPhase::TransitionWindow);
  CHECK(s.throttle_rate == doctest::Approx(0.30).epsilon(1e-12));
  for (Minute m = 1231; m <= 1260; ++m) s = step_phase(s, m, ledger, spec);
  CHECK(s.phase == PacingPhase::FastFinish);
  CHECK(s.throttle_rate == 0.0);
}

TEST_CASE("goal reached is absorbing") {
  const auto spec = day_spec();
  BillingLedger ledger(spec.daily_goal, spec.billing_cap);
  ledger.bill(spec.daily_goal);
  for (auto phase : {PacingPhase::IntradayPacing, PacingPhase::TransitionWindow,
                     PacingPhase::FastFinish}) {
    auto s = window_state(0.4, 600, 60);
    s.phase = phase;
    s = step_phase(s, 700, ledger, spec);
    CHECK(s.phase == PacingPhase::GoalReached);
    CHECK(s.throttle_rate == 1.0);
    CHECK_FALSE(admit_request(s, 0.99));
  }
  auto s = mark_goal_reached(window_state(0.0, 600, 0));
  const BillingLedger fresh(spec.daily_goal, spec.billing_cap);
  CHECK(step_phase(s, 10, fresh, spec).phase == PacingPhase::GoalReached);
}

TEST_CASE("admission follows the throttle") {
  PacingState s;
  s.throttle_rate = 0.0;
  CHECK(admit_request(s, 0.0));
  s.throttle_rate = 1.0;
  CHECK_FALSE(admit_request(s, 0.999999));

  s.throttle_rate = 0.25;
  const RandomStream rng(2024, Stream::Admission);
  int admitted = 0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) admitted += admit_request(s, rng.uniform(i));
  CHECK(static_cast<double>(admitted) / kDraws == doctest::Approx(0.75).epsilon(0.002 / 0.75));
}

TEST_CASE("phase walk never goes backwards") {
  auto spec = day_spec();
  const BillingLedger ledger(spec.daily_goal, spec.billing_cap);
  auto s = initial_state(spec, {0.9, 45});
  PacingPhase prev = s.phase;
  for (Minute m = 0; m < kMinutesPerDay; ++m) {
    s = step_phase(s, m, ledger, spec);
    CHECK((s.phase == prev || is_legal_transition(prev, s.phase)));
    CHECK(s.throttle_rate >= 0.0);
    CHECK(s.throttle_rate <= 1.0);
    prev = s.phase;
  }
  CHECK(prev == PacingPhase::FastFinish);
}
