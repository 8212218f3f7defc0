#include "pacekit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <thread>

#include "pacekit/random.hpp"

namespace pacekit {

ArmConfig ArmConfig::traditional_ff(double start_fraction) {
  ArmConfig a;
  a.mode = PacingMode::TraditionalFF;
  a.static_start_fraction = start_fraction;
  return a;
}

ArmConfig ArmConfig::smart(const SffParams& params) {
  ArmConfig a;
  a.mode = PacingMode::Sff;
  a.params = params;
  return a;
}

std::pair<Money, Money> split_budget(Money total) {
  const Money treatment = Money::from_micros(total.micros() / 2);
  return {total - treatment, treatment};
}

CampaignSpec arm_spec(const CampaignSpec& spec, bool control) {
  CampaignSpec out = spec;
  const auto [goal_c, goal_t] = split_budget(spec.daily_goal);
  const auto [cap_c, cap_t] = split_budget(spec.billing_cap);
  out.daily_goal = control ? goal_c : goal_t;
  out.billing_cap = control ? cap_c : cap_t;
  return out;
}

namespace {

CampaignMetrics run_arm(const CampaignSpec& spec, const CampaignHistory& history,
                        const TrafficModel& traffic, const ArmConfig& arm, std::uint64_t seed,
                        const AbConfig& config, bool control) {
  const CampaignSpec half = arm_spec(spec, control);
  SimOptions options = config.options;
  options.traffic_share = 2;
  options.static_start_fraction = arm.static_start_fraction;
  CampaignHistory scratch = history;
  const auto days =
      simulate_closed_loop(half, arm.params, scratch, config.days, traffic, seed, options, arm.mode);

  CampaignMetrics total;
  total.goal_hit = true;
  for (const auto& d : days) {
    const auto m = campaign_metrics(d.result, half, config.live_hours_basis);
    total.live_hours += m.live_hours;
    total.overdelivery_rate += m.overdelivery_rate;
    total.total_spend += m.total_spend;
    total.goal_hit = total.goal_hit && m.goal_hit;
  }
  total.live_hours /= static_cast<double>(days.size());
  total.overdelivery_rate /= static_cast<double>(days.size());
  return total;
}

}  // namespace

AbAggregates aggregate_rows(std::span<const AbRow> rows, const SummaryBuckets& buckets) {
  if (rows.empty()) throw EmptyGroup("no successful campaigns to aggregate");
  std::vector<CampaignMetrics> control;
  std::vector<CampaignMetrics> treatment;
  std::vector<double> delta_hours;
  std::vector<double> delta_over;
  for (const auto& r : rows) {
    control.push_back(r.control);
    treatment.push_back(r.treatment);
    delta_hours.push_back(r.delta_live_hours);
    delta_over.push_back(r.delta_overdelivery);
  }
  AbAggregates a;
  a.campaigns = rows.size();
  a.control = summarize(control, buckets);
  a.treatment = summarize(treatment, buckets);
  a.delta_live_hours = summarize_values(delta_hours, buckets.delta_live_hours_edges);
  a.mean_delta_live_hours = a.delta_live_hours.mean;
  a.mean_delta_overdelivery = summarize_values(delta_over, std::span<const double>{}).mean;
  return a;
}

namespace {

bool same(const DistributionSummary& a, const DistributionSummary& b) {
  return a.count == b.count && a.mean == b.mean && a.median == b.median &&
         a.histogram.edges == b.histogram.edges && a.histogram.counts == b.histogram.counts;
}

}  // namespace

bool aggregates_consistent(const AbResult& result, const SummaryBuckets& buckets) {
  if (result.rows.empty()) return !result.aggregates.has_value();
  if (!result.aggregates) return false;
  const auto fresh = aggregate_rows(result.rows, buckets);
  const auto& a = *result.aggregates;
  return a.campaigns == fresh.campaigns && a.mean_delta_live_hours == fresh.mean_delta_live_hours &&
         a.mean_delta_overdelivery == fresh.mean_delta_overdelivery &&
         same(a.control.live_hours, fresh.control.live_hours) &&
         same(a.control.overdelivery_rate, fresh.control.overdelivery_rate) &&
         same(a.treatment.live_hours, fresh.treatment.live_hours) &&
         same(a.treatment.overdelivery_rate, fresh.treatment.overdelivery_rate) &&
         same(a.delta_live_hours, fresh.delta_live_hours);
}

AbResult run_budget_split(std::span<const CampaignSpec> campaigns,
                          std::span<const CampaignHistory> histories,
                          std::span<const TrafficModel> traffic, const AbConfig& config) {
  if (campaigns.empty()) throw EmptyGroup("budget split needs at least one campaign");
  if (!histories.empty() && histories.size() != campaigns.size()) {
    throw std::invalid_argument("need one history per campaign");
  }
  if (traffic.size() != 1 && traffic.size() != campaigns.size()) {
    throw std::invalid_argument("need one shared traffic model or one per campaign");
  }
  if (config.days < 1) throw std::invalid_argument("days must be >= 1");

  const std::size_t n = campaigns.size();
  std::vector<std::optional<AbRow>> rows(n);
  std::vector<std::optional<std::string>> errors(n);
  const CampaignHistory empty_history;

  auto run_one = [&](std::size_t i) {
    const auto& spec = campaigns[i];
    try {
      const auto& history = histories.empty() ? empty_history : histories[i];
      const auto& model = traffic.size() == 1 ? traffic[0] : traffic[i];
      const std::uint64_t seed = derive_seed(config.seed, hash_tag(spec.campaign_id));
      AbRow row;
      row.campaign_id = spec.campaign_id;
      row.control = run_arm(spec, history, model, config.control, seed, config, true);
      row.treatment = run_arm(spec, history, model, config.treatment, seed, config, false);
      row.delta_live_hours = row.treatment.live_hours - row.control.live_hours;
      row.delta_overdelivery = row.treatment.overdelivery_rate - row.control.overdelivery_rate;
      rows[i] = std::move(row);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run_one(i);
      });
    }
  }

  AbResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]) result.rows.push_back(std::move(*rows[i]));
    if (errors[i]) result.failures.push_back({campaigns[i].campaign_id, *errors[i]});
  }
  if (!result.rows.empty()) result.aggregates = aggregate_rows(result.rows, config.buckets);
  return result;
}

AbResult run_budget_split(std::span<const CampaignSpec> campaigns,
                          std::span<const CampaignHistory> histories, const SffParams& params,
                          double control_start_fraction, std::span<const TrafficModel> traffic,
                          int days, std::uint64_t seed) {
  AbConfig config;
  config.control = ArmConfig::traditional_ff(control_start_fraction);
  config.treatment = ArmConfig::smart(params);
  config.days = days;
  config.seed = seed;
  return run_budget_split(campaigns, histories, traffic, config);
}

std::vector<SyntheticCampaign> synthetic_campaigns(int count, std::uint64_t seed, Date start) {
  const RandomStream rng(seed, Stream::Traffic);
  auto draw = [&](int i, int field, double lo, double hi) {
    return lo + (hi - lo) * rng.uniform(static_cast<std::uint64_t>(i), field);
  };
  auto round_cents = [](double units) { return Money::from_micros(std::llround(units * 100) * 10'000); };
  constexpr Minute kStarts[] = {0, 300, 360, 420};

  std::vector<SyntheticCampaign> out;
  for (int i = 0; i < count; ++i) {
    SyntheticCampaign c;
    auto& s = c.spec;
    char id[16];
    std::snprintf(id, sizeof(id), "syn-%03d", i);
    s.campaign_id = id;
    s.conversion_rate = std::round(draw(i, 0, 0.06, 0.14) * 1000) / 1000;
    s.fee_per_conversion = round_cents(draw(i, 1, 6.0, 14.0));
    s.conversion_delay = DelayModel::exponential(std::round(draw(i, 2, 20.0, 40.0)));
    s.targeting_start = kStarts[static_cast<int>(draw(i, 3, 0.0, 4.0))];
    s.targeting_end = kMinutesPerDay;

    c.traffic.kind = TrafficKind::Constant;
    c.traffic.rate = 2.0 * std::floor(draw(i, 4, 8.0, 16.0));  // even: splits cleanly
    c.traffic.win_probability = 0.5;
    c.traffic.win_noise = 0.05;

    // Size the goal so ASAP pacing would exhaust it after `asap_hours`.
    const double asap_hours = draw(i, 5, 3.0, 5.0);
    const double per_minute = c.traffic.rate * c.traffic.win_probability * s.conversion_rate *
                              s.fee_per_conversion.units();
    s.daily_goal = round_cents(std::round(per_minute * 60.0 * asap_hours));
    s.billing_cap = round_cents(std::round(s.daily_goal.units() * draw(i, 6, 1.15, 1.30)));

    const double ratio = draw(i, 7, 1.05, 1.45);
    for (int d = 28; d >= 1; --d) {
      const double r = ratio + (rng.uniform(static_cast<std::uint64_t>(i), 100 + d) - 0.5) * 0.1;
      c.history.append({start - std::chrono::days{d},
                        Money::from_micros(std::llround(s.daily_goal.micros() * r)), s.daily_goal});
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pacekit
