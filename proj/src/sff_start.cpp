#include "pacekit/sff_start.hpp"

#include <algorithm>
#include <cmath>

namespace pacekit {

OverspendRatio compute_overspend_ratio(const CampaignHistory& history, int lookback_days,
                                       Date as_of, RatioAveraging averaging) {
  if (lookback_days < 1) throw std::invalid_argument("lookback_days must be >= 1");
  const Date window_start = as_of - std::chrono::days{lookback_days};

  double ratio_sum = 0.0;
  std::int64_t spend_total = 0;
  std::int64_t goal_total = 0;
  int used = 0;
  for (const auto& r : history.records()) {
    if (r.date < window_start || r.date >= as_of) continue;
    if (r.actual_spend == Money::zero()) continue;  // dark day, no pacing signal
    ratio_sum += r.actual_spend / r.daily_goal;
    spend_total += r.actual_spend.micros();
    goal_total += r.daily_goal.micros();
    ++used;
  }
  if (used == 0) {
    throw NoHistory("no spend records in the " + std::to_string(lookback_days) +
                    "-day window before " + format_date(as_of));
  }
  if (averaging == RatioAveraging::RatioOfTotals) {
    return {static_cast<double>(spend_total) / static_cast<double>(goal_total)};
  }
  return {ratio_sum / used};
}

double sff_start_fraction(OverspendRatio ratio, const SffParams& p) {
  const double clamped = std::clamp(ratio.value, p.min_or, p.max_or);
  const double d = (p.max_start - p.min_start) / std::sqrt(p.max_or - p.min_or);
  const double t = d * std::sqrt(clamped - p.min_or) + p.min_start;
  // Rounding can push the max_or endpoint a hair past max_start.
  return std::clamp(t, p.min_start, p.max_start);
}

double update_start_fraction(CampaignHistory& history, double candidate, Date today,
                             const SffParams& params) {
  const auto current = history.current_start_fraction();
  const auto last = history.last_refresh_date();
  const bool refresh_due =
      !current || !last || (today - *last).count() >= params.refresh_period_days;
  if (refresh_due) {
    history.set_start(candidate, today);
    return candidate;
  }
  const double kept = std::max(*current, candidate);
  history.set_start(kept, std::nullopt);
  return kept;
}

}  // namespace pacekit
