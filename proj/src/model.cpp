#include "pacekit/model.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace pacekit {
namespace {

std::string join_violations(const std::vector<SpecViolation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.reason;
  }
  return out;
}

}  // namespace

Date parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
    throw std::invalid_argument("expected YYYY-MM-DD date, got '" + text + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw std::invalid_argument("not a calendar date: '" + text + "'");
  return std::chrono::sys_days{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

InvalidSpec::InvalidSpec(std::vector<SpecViolation> violations)
    : std::invalid_argument("invalid spec: " + join_violations(violations)),
      violations_(std::move(violations)) {}

InvalidSpec::InvalidSpec(std::string field, std::string reason)
    : InvalidSpec(std::vector<SpecViolation>{{std::move(field), std::move(reason)}}) {}

DelayModel DelayModel::fixed(int delay_minutes) {
  if (delay_minutes < 0) throw InvalidSpec("conversion_delay.minutes", "delay must be >= 0");
  DelayModel m;
  m.kind_ = DelayKind::Fixed;
  m.fixed_minutes_ = delay_minutes;
  return m;
}

DelayModel DelayModel::exponential(double mean_minutes) {
  if (!std::isfinite(mean_minutes) || mean_minutes < 0.0) {
    throw InvalidSpec("conversion_delay.mean_minutes", "mean must be finite and >= 0");
  }
  DelayModel m;
  m.kind_ = DelayKind::Exponential;
  m.exp_mean_ = mean_minutes;
  return m;
}

DelayModel DelayModel::histogram(std::vector<DelayBucket> buckets) {
  if (buckets.empty()) throw InvalidSpec("conversion_delay.buckets", "histogram is empty");
  double total = 0.0;
  for (const auto& b : buckets) {
    if (b.delay_minutes < 0) throw InvalidSpec("conversion_delay.buckets", "delay must be >= 0");
    if (!(b.probability >= 0.0)) {
      throw InvalidSpec("conversion_delay.buckets", "probabilities must be >= 0");
    }
    total += b.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidSpec("conversion_delay.buckets", "probabilities must sum to 1");
  }
  DelayModel m;
  m.kind_ = DelayKind::Histogram;
  m.buckets_ = std::move(buckets);
  return m;
}

double DelayModel::mean_minutes() const {
  switch (kind_) {
    case DelayKind::Fixed:
      return fixed_minutes_;
    case DelayKind::Exponential:
      return exp_mean_;
    case DelayKind::Histogram:
      return std::accumulate(buckets_.begin(), buckets_.end(), 0.0,
                             [](double acc, const DelayBucket& b) {
                               return acc + b.delay_minutes * b.probability;
                             });
  }
  return 0.0;
}

std::vector<SpecViolation> check_campaign(const CampaignSpec& spec) {
  std::vector<SpecViolation> out;
  if (spec.campaign_id.empty()) out.push_back({"campaign_id", "must not be empty"});
  if (spec.daily_goal <= Money::zero()) out.push_back({"daily_goal", "must be > 0"});
  if (spec.billing_cap < spec.daily_goal) {
    out.push_back({"billing_cap", "must be >= daily_goal"});
  }
  if (spec.fee_per_conversion <= Money::zero()) {
    out.push_back({"fee_per_conversion", "must be > 0"});
  }
  if (!(spec.conversion_rate >= 0.0 && spec.conversion_rate <= 1.0)) {
    out.push_back({"conversion_rate", "must lie in [0, 1]"});
  }
  if (spec.targeting_start < 0 || spec.targeting_start >= spec.targeting_end ||
      spec.targeting_end > kMinutesPerDay) {
    out.push_back({"targeting_start", "need 0 <= targeting_start < targeting_end <= 1440"});
  }
  return out;
}

const CampaignSpec& validate_campaign(const CampaignSpec& spec) {
  auto violations = check_campaign(spec);
  if (!violations.empty()) throw InvalidSpec(std::move(violations));
  return spec;
}

std::vector<SpecViolation> check_params(const SffParams& p) {
  std::vector<SpecViolation> out;
  if (!(p.min_or >= 1.0)) out.push_back({"min_or", "must be >= 1.0"});
  if (!(p.max_or > p.min_or) || !std::isfinite(p.max_or)) {
    out.push_back({"max_or", "must be finite and > min_or"});
  }
  if (!(p.min_start > 0.0)) out.push_back({"min_start", "must be > 0"});
  if (!(p.max_start > p.min_start)) out.push_back({"max_start", "must be > min_start"});
  if (!(p.max_start < 1.0)) out.push_back({"max_start", "must be < 1"});
  if (p.transition_window_minutes < 0) {
    out.push_back({"transition_window_minutes", "must be >= 0"});
  }
  if (p.refresh_period_days < 1) out.push_back({"refresh_period_days", "must be >= 1"});
  return out;
}

const SffParams& validate_params(const SffParams& params) {
  auto violations = check_params(params);
  if (!violations.empty()) throw InvalidSpec(std::move(violations));
  return params;
}

const SffParams& validate_params(const SffParams& params, const CampaignSpec& spec) {
  auto violations = check_params(params);
  const double limit = std::floor(params.max_start * spec.targeting_span());
  if (params.transition_window_minutes > limit) {
    violations.push_back({"transition_window_minutes",
                          "window longer than max_start share of the targeting window"});
  }
  if (!violations.empty()) throw InvalidSpec(std::move(violations));
  return params;
}

const char* to_string(PacingPhase phase) {
  switch (phase) {
    case PacingPhase::IntradayPacing:
      return "intraday_pacing";
    case PacingPhase::TransitionWindow:
      return "transition_window";
    case PacingPhase::FastFinish:
      return "fast_finish";
    case PacingPhase::GoalReached:
      return "goal_reached";
  }
  return "unknown";
}

bool is_legal_transition(PacingPhase from, PacingPhase to) {
  if (to == PacingPhase::GoalReached) return true;
  if (from == PacingPhase::GoalReached) return false;
  return static_cast<int>(to) >= static_cast<int>(from);
}

BillingLedger::BillingLedger(Money daily_goal, Money billing_cap)
    : daily_goal_(daily_goal), billing_cap_(billing_cap) {
  if (daily_goal <= Money::zero()) throw InvalidSpec("daily_goal", "must be > 0");
  if (billing_cap < daily_goal) throw InvalidSpec("billing_cap", "must be >= daily_goal");
}

std::vector<PendingAttribution> BillingLedger::pending() const {
  std::vector<PendingAttribution> out;
  out.reserve(pending_.size());
  for (const auto& [due, fee] : pending_) out.push_back({due, fee});
  return out;
}

void BillingLedger::add_pending(Minute due_minute, Money fee) {
  if (fee.is_negative()) throw std::invalid_argument("pending fee must be >= 0");
  // multimap inserts equal keys at the upper bound, preserving insertion order.
  pending_.emplace(due_minute, fee);
  pending_total_ += fee;
}

std::optional<PendingAttribution> BillingLedger::pop_due(Minute upto) {
  if (pending_.empty() || pending_.begin()->first > upto) return std::nullopt;
  auto it = pending_.begin();
  PendingAttribution out{it->first, it->second};
  pending_.erase(it);
  pending_total_ -= out.fee;
  return out;
}

Money BillingLedger::bill(Money fee) {
  const Money headroom = billing_cap_ - recognized_;
  const Money billed = fee < headroom ? fee : headroom;
  recognized_ += billed;
  dropped_ += fee - billed;
  overdelivery_ = recognized_ > daily_goal_ ? recognized_ - daily_goal_ : Money::zero();
  return billed;
}

CampaignHistory::CampaignHistory(std::vector<DailyRecord> records) {
  for (const auto& r : records) append(r);
}

void CampaignHistory::append(const DailyRecord& record) {
  if (record.daily_goal <= Money::zero()) {
    throw InvalidSpec("history.daily_goal", "must be > 0");
  }
  if (record.actual_spend.is_negative()) {
    throw InvalidSpec("history.actual_spend", "must be >= 0");
  }
  if (!records_.empty() && record.date <= records_.back().date) {
    throw InvalidSpec("history.date", "records must be strictly increasing by date");
  }
  records_.push_back(record);
}

void CampaignHistory::set_start(double fraction, std::optional<Date> refreshed_on) {
  current_start_ = fraction;
  if (refreshed_on) last_refresh_ = refreshed_on;
}

CampaignHistory make_flat_history(Money daily_goal, double ratio, int days, Date end) {
  CampaignHistory h;
  const Money spend = Money::from_micros(
      static_cast<std::int64_t>(std::llround(static_cast<double>(daily_goal.micros()) * ratio)));
  for (int i = days; i >= 1; --i) {
    h.append({end - std::chrono::days{i}, spend, daily_goal});
  }
  return h;
}

}  // namespace pacekit
