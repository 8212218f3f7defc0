#pragma once

#include <optional>

#include "pacekit/model.hpp"

namespace pacekit {

// An auction win that turned into a click. Conversions are billed at
// conversion_minute, which may fall after the daily goal was hit.
struct ClickEvent {
  Minute minute = 0;
  Money fee;
  bool converts = false;
  std::optional<Minute> conversion_minute;
};

// Inverse-transform draw from the delay distribution, rounded to whole minutes.
int draw_delay(const DelayModel& model, double u);

ClickEvent schedule_click(Minute click_minute, const CampaignSpec& spec, double u_convert,
                          double u_delay);

// Bills every pending attribution due at or before `minute`, in due order.
// Amounts beyond the billing cap go to dropped_spend.
void settle_due(BillingLedger& ledger, Minute minute);

// Bills everything still pending regardless of due minute.
void settle_all(BillingLedger& ledger);

}  // namespace pacekit
