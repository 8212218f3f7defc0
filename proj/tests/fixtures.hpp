#pragma once

#include "pacekit/model.hpp"
#include "pacekit/traffic.hpp"

namespace fixtures {

inline const pacekit::Date kStart = pacekit::parse_date("2024-06-01");

// High-spend campaign; unthrottled it exhausts the goal in about four hours.
inline pacekit::CampaignSpec high_spend() {
  pacekit::CampaignSpec s;
  s.campaign_id = "high-spend-1";
  s.daily_goal = pacekit::Money::from_units(2400);
  s.billing_cap = pacekit::Money::from_units(2880);
  s.fee_per_conversion = pacekit::Money::from_units(10);
  s.conversion_rate = 0.1;
  s.conversion_delay = pacekit::DelayModel::exponential(30);
  return s;
}

inline pacekit::TrafficModel steady_traffic(double rate = 20) {
  return {pacekit::TrafficKind::Constant, rate};
}

inline pacekit::CampaignHistory overspend_history(double ratio = 1.25, int days = 28) {
  return pacekit::make_flat_history(high_spend().daily_goal, ratio, days, kStart);
}

}  // namespace fixtures
