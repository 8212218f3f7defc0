#include <doctest.h>

#include "pacekit/attribution.hpp"
#include "pacekit/random.hpp"

using namespace pacekit;

namespace {

CampaignSpec spec_with(double rate, DelayModel delay) {
  CampaignSpec s;
  s.campaign_id = "a";
  s.daily_goal = Money::from_units(100);
  s.billing_cap = Money::from_units(120);
  s.fee_per_conversion = Money::from_units(10);
  s.conversion_rate = rate;
  s.conversion_delay = delay;
  return s;
}

}  // namespace

TEST_CASE("schedule_click boundary rates") {
  const auto always = spec_with(1.0, DelayModel::fixed(0));
  const auto e = schedule_click(17, always, 0.999, 0.5);
  CHECK(e.converts);
  CHECK(e.conversion_minute == 17);
  CHECK(e.fee == always.fee_per_conversion);

  const auto never = spec_with(0.0, DelayModel::fixed(0));
  CHECK_FALSE(schedule_click(17, never, 0.0, 0.5).converts);
  CHECK_FALSE(schedule_click(17, never, 0.0, 0.5).conversion_minute.has_value());
}

TEST_CASE("exponential delays match the analytic distribution") {
  const auto spec = spec_with(0.2, DelayModel::exponential(90));
  const RandomStream conv(7, Stream::Conversion);
  const RandomStream delay(7, Stream::Delay);
  constexpr int kClicks = 100'000;
  int converted = 0;
  double delay_sum = 0;
  for (int i = 0; i < kClicks; ++i) {
    const auto e = schedule_click(0, spec, conv.uniform(i), delay.uniform(i));
    if (!e.converts) continue;
    ++converted;
    delay_sum += *e.conversion_minute;
  }
  CHECK(std::abs(static_cast<double>(converted) / kClicks - 0.2) < 0.004);
  CHECK(std::abs(delay_sum / converted - 90.0) < 1.5);
}

TEST_CASE("histogram delay inverse CDF") {
  const auto h = DelayModel::histogram({{5, 0.25}, {60, 0.5}, {240, 0.25}});
  CHECK(draw_delay(h, 0.0) == 5);
  CHECK(draw_delay(h, 0.2499) == 5);
  CHECK(draw_delay(h, 0.25) == 60);
  CHECK(draw_delay(h, 0.7499) == 60);
  CHECK(draw_delay(h, 0.9999) == 240);
  CHECK(draw_delay(DelayModel::fixed(12), 0.3) == 12);
}

TEST_CASE("settle_due examples") {
  const auto units = [](double v) { return Money::from_units(v); };

  BillingLedger a(units(100), units(120));
  a.bill(units(95));
  a.add_pending(10, units(10));
  settle_due(a, 10);
  CHECK(a.recognized_spend() == units(105));
  CHECK(a.overdelivery_spend() == units(5));

  BillingLedger b(units(100), units(120));
  b.bill(units(118));
  b.add_pending(3, units(10));
  settle_due(b, 5);
  CHECK(b.recognized_spend() == units(120));
  CHECK(b.dropped_spend() == units(8));

  BillingLedger c(units(100), units(120));
  c.bill(units(40));
  c.add_pending(50, units(10));
  settle_due(c, 49);
  CHECK(c.recognized_spend() == units(40));
  CHECK(c.pending_count() == 1);
  settle_all(c);
  CHECK(c.recognized_spend() == units(50));
  CHECK(c.pending_count() == 0);
}

TEST_CASE("zero delay overshoots the goal by less than one fee") {
  const auto spec = spec_with(1.0, DelayModel::fixed(0));
  for (int goal_units : {1, 7, 95, 100, 333}) {
    BillingLedger l(Money::from_units(goal_units), Money::from_units(goal_units * 2));
    Minute m = 0;
    while (!l.goal_reached()) {
      const auto e = schedule_click(m, spec, 0.0, 0.0);
      l.add_pending(*e.conversion_minute, e.fee);
      settle_due(l, m);
      ++m;
    }
    CHECK(l.overdelivery_spend() < spec.fee_per_conversion);
  }
}
