#include "pacekit/attribution.hpp"

#include <cmath>
#include <limits>

namespace pacekit {

int draw_delay(const DelayModel& model, double u) {
  switch (model.kind()) {
    case DelayKind::Fixed:
      return model.fixed_minutes();
    case DelayKind::Exponential: {
      const double x = -model.mean_minutes() * std::log1p(-u);
      return static_cast<int>(std::lround(x));
    }
    case DelayKind::Histogram: {
      double cumulative = 0.0;
      for (const auto& b : model.buckets()) {
        cumulative += b.probability;
        if (u < cumulative) return b.delay_minutes;
      }
      // u landed in the rounding slack above the last cumulative sum.
      return model.buckets().back().delay_minutes;
    }
  }
  return 0;
}

ClickEvent schedule_click(Minute click_minute, const CampaignSpec& spec, double u_convert,
                          double u_delay) {
  ClickEvent e;
  e.minute = click_minute;
  e.fee = spec.fee_per_conversion;
  e.converts = u_convert < spec.conversion_rate;
  if (e.converts) e.conversion_minute = click_minute + draw_delay(spec.conversion_delay, u_delay);
  return e;
}

void settle_due(BillingLedger& ledger, Minute minute) {
  while (auto due = ledger.pop_due(minute)) ledger.bill(due->fee);
}

void settle_all(BillingLedger& ledger) { settle_due(ledger, std::numeric_limits<Minute>::max()); }

}  // namespace pacekit
