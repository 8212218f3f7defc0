#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacekit/money.hpp"

namespace pacekit {

// Whole minutes since midnight. Conversion times may run past the end of the
// day, so values above kMinutesPerDay are legal for due minutes.
using Minute = int;
inline constexpr Minute kMinutesPerDay = 1440;

using Date = std::chrono::sys_days;

// Parses/prints ISO "YYYY-MM-DD". parse_date throws std::invalid_argument.
Date parse_date(const std::string& text);
std::string format_date(Date d);

struct SpecViolation {
  std::string field;
  std::string reason;
};

// Raised when a domain value violates one of its invariants. field() names the
// first offending field; violations() lists every one that was found.
class InvalidSpec : public std::invalid_argument {
 public:
  explicit InvalidSpec(std::vector<SpecViolation> violations);
  InvalidSpec(std::string field, std::string reason);

  [[nodiscard]] const std::string& field() const { return violations_.front().field; }
  [[nodiscard]] const std::vector<SpecViolation>& violations() const { return violations_; }

 private:
  std::vector<SpecViolation> violations_;
};

enum class DelayKind { Fixed, Exponential, Histogram };

struct DelayBucket {
  int delay_minutes = 0;
  double probability = 0.0;
};

// Distribution of click-to-conversion delay in minutes. Only constructible
// through the validating factories.
class DelayModel {
 public:
  static DelayModel fixed(int delay_minutes);
  static DelayModel exponential(double mean_minutes);
  static DelayModel histogram(std::vector<DelayBucket> buckets);

  [[nodiscard]] DelayKind kind() const { return kind_; }
  [[nodiscard]] int fixed_minutes() const { return fixed_minutes_; }
  [[nodiscard]] double mean_minutes() const;
  [[nodiscard]] const std::vector<DelayBucket>& buckets() const { return buckets_; }

 private:
  DelayModel() = default;

  DelayKind kind_ = DelayKind::Fixed;
  int fixed_minutes_ = 0;
  double exp_mean_ = 0.0;
  std::vector<DelayBucket> buckets_;
};

struct CampaignSpec {
  std::string campaign_id;
  Money daily_goal;
  Money billing_cap;
  Money fee_per_conversion;
  double conversion_rate = 0.0;
  DelayModel conversion_delay = DelayModel::fixed(0);
  Minute targeting_start = 0;
  Minute targeting_end = kMinutesPerDay;

  [[nodiscard]] int targeting_span() const { return targeting_end - targeting_start; }
};

std::vector<SpecViolation> check_campaign(const CampaignSpec& spec);
// Returns the spec unchanged when every invariant holds, throws InvalidSpec otherwise.
const CampaignSpec& validate_campaign(const CampaignSpec& spec);

// Clamp and timing parameters of the dynamic fast-finish start.
struct SffParams {
  double min_or = 1.03;
  double max_or = 1.50;
  double min_start = 0.85;
  double max_start = 0.95;
  int transition_window_minutes = 60;
  int refresh_period_days = 7;
};

std::vector<SpecViolation> check_params(const SffParams& params);
const SffParams& validate_params(const SffParams& params);
// Also checks that the transition window fits the campaign's targeting window.
const SffParams& validate_params(const SffParams& params, const CampaignSpec& spec);

enum class PacingPhase { IntradayPacing, TransitionWindow, FastFinish, GoalReached };

const char* to_string(PacingPhase phase);
// Intraday -> Window -> FastFinish (stages may be skipped), anything -> GoalReached.
bool is_legal_transition(PacingPhase from, PacingPhase to);

struct PendingAttribution {
  Minute due_minute = 0;
  Money fee;
};

// Daily billing state. overdelivery_spend() == max(0, recognized - goal) after
// every mutation and recognized never exceeds the cap.
class BillingLedger {
 public:
  BillingLedger(Money daily_goal, Money billing_cap);

  [[nodiscard]] Money daily_goal() const { return daily_goal_; }
  [[nodiscard]] Money billing_cap() const { return billing_cap_; }
  [[nodiscard]] Money recognized_spend() const { return recognized_; }
  [[nodiscard]] Money overdelivery_spend() const { return overdelivery_; }
  [[nodiscard]] Money dropped_spend() const { return dropped_; }
  [[nodiscard]] Money pending_fees() const { return pending_total_; }
  [[nodiscard]] std::size_t pending_count() const { return pending_.size(); }
  [[nodiscard]] bool goal_reached() const { return recognized_ >= daily_goal_; }

  // Pending attributions in due order; equal due minutes keep insertion order.
  [[nodiscard]] std::vector<PendingAttribution> pending() const;

  void add_pending(Minute due_minute, Money fee);
  // Removes and returns the earliest pending attribution due at or before `upto`.
  std::optional<PendingAttribution> pop_due(Minute upto);
  // Bills as much of `fee` as the cap allows; the remainder is dropped.
  // Returns the billed amount.
  Money bill(Money fee);

 private:
  Money daily_goal_;
  Money billing_cap_;
  Money recognized_;
  Money overdelivery_;
  Money dropped_;
  Money pending_total_;
  std::multimap<Minute, Money> pending_;
};

struct DailyRecord {
  Date date;
  Money actual_spend;
  Money daily_goal;
};

class CampaignHistory {
 public:
  CampaignHistory() = default;
  explicit CampaignHistory(std::vector<DailyRecord> records);

  // Records must arrive in strictly increasing date order with a positive goal.
  void append(const DailyRecord& record);

  [[nodiscard]] const std::vector<DailyRecord>& records() const { return records_; }
  [[nodiscard]] std::optional<double> current_start_fraction() const { return current_start_; }
  [[nodiscard]] std::optional<Date> last_refresh_date() const { return last_refresh_; }

  void set_start(double fraction, std::optional<Date> refreshed_on);

 private:
  std::vector<DailyRecord> records_;
  std::optional<double> current_start_;
  std::optional<Date> last_refresh_;
};

// Uniform synthetic history: `days` records ending the day before `end`, each
// spending goal * ratio.
CampaignHistory make_flat_history(Money daily_goal, double ratio, int days, Date end);

}  // namespace pacekit
