#include "pacekit/simulator.hpp"

#include <limits>

#include "pacekit/random.hpp"

namespace pacekit {

const char* to_string(PacingMode mode) {
  switch (mode) {
    case PacingMode::Sff:
      return "sff";
    case PacingMode::TraditionalFF:
      return "traditional_ff";
    case PacingMode::Asap:
      return "asap";
  }
  return "unknown";
}

std::uint64_t day_seed(std::uint64_t seed, int day_index) {
  return derive_seed(seed, hash_tag("day") + static_cast<std::uint64_t>(day_index));
}

Date default_as_of(const CampaignHistory& history) {
  if (history.records().empty()) return Date{};
  return history.records().back().date + std::chrono::days{1};
}

namespace {

double sff_candidate(const CampaignHistory& history, const SffParams& params, Date as_of,
                     const SffOptions& options) {
  try {
    const auto ratio =
        compute_overspend_ratio(history, options.lookback_days, as_of, options.averaging);
    return sff_start_fraction(ratio, params);
  } catch (const NoHistory&) {
    return params.min_start;
  }
}

}  // namespace

DayPlan resolve_plan(PacingMode mode, const CampaignSpec& spec, const SffParams& params,
                     const CampaignHistory& history, Date as_of, const SimOptions& options) {
  switch (mode) {
    case PacingMode::Asap:
      return {0.0, 0};
    case PacingMode::TraditionalFF:
      if (!(options.static_start_fraction >= 0.0 && options.static_start_fraction <= 1.0)) {
        throw InvalidSpec("control_start_fraction", "must lie in [0, 1]");
      }
      return {options.static_start_fraction, 0};
    case PacingMode::Sff: {
      validate_params(params, spec);
      const double candidate = sff_candidate(history, params, as_of, options.sff);
      if (!options.sff.monotone_updates) return {candidate, params.transition_window_minutes};
      CampaignHistory scratch = history;
      return {update_start_fraction(scratch, candidate, as_of, params),
              params.transition_window_minutes};
    }
  }
  return {};
}

SimulationResult simulate_plan(const CampaignSpec& spec, const DayPlan& plan,
                               const TrafficModel& traffic, std::uint64_t seed,
                               const SimOptions& options,
                               const std::vector<PendingAttribution>& carried) {
  validate_campaign(spec);
  validate_traffic(traffic);
  if (options.traffic_share < 1) throw std::invalid_argument("traffic_share must be >= 1");

  SimulationResult out{BillingLedger(spec.daily_goal, spec.billing_cap)};
  BillingLedger& ledger = out.final_ledger;
  for (const auto& p : carried) ledger.add_pending(p.due_minute, p.fee);

  out.first_minute = spec.targeting_start;
  out.plan = plan;
  const auto span = static_cast<std::size_t>(spec.targeting_span());
  out.spend_curve.reserve(span + 1);
  out.phase_trace.reserve(span);
  out.throttle_trace.reserve(span);

  const RandomStream traffic_rng(seed, Stream::Traffic);
  const RandomStream admission_rng(seed, Stream::Admission);
  const RandomStream noise_rng(seed, Stream::WinNoise);
  const RandomStream auction_rng(seed, Stream::Auction);
  const RandomStream conversion_rng(seed, Stream::Conversion);
  const RandomStream delay_rng(seed, Stream::Delay);
  const FeedbackController controller(options.controller);

  PacingState state = initial_state(spec, plan, options.plan);
  for (Minute m = spec.targeting_start; m < spec.targeting_end; ++m) {
    settle_due(ledger, m);
    if (!out.goal_hit_minute && ledger.goal_reached()) out.goal_hit_minute = m;
    state = step_phase(state, m, ledger, spec, controller);

    const int n = requests_at(traffic, m, traffic_rng) / options.traffic_share;
    out.requests += n;
    const auto key = static_cast<std::uint64_t>(m);
    for (int i = 0; i < n && state.phase != PacingPhase::GoalReached; ++i) {
      if (!admit_request(state, admission_rng.uniform(key, i))) continue;
      ++out.admitted;
      const double p =
          noisy_win_probability(traffic.win_probability, traffic.win_noise, noise_rng.uniform(key, i));
      if (!auction_win(p, auction_rng.uniform(key, i))) continue;
      ++out.wins;
      const ClickEvent click =
          schedule_click(m, spec, conversion_rng.uniform(key, i), delay_rng.uniform(key, i));
      if (!click.converts) continue;
      out.conversions.push_back(click);
      ledger.add_pending(*click.conversion_minute, click.fee);
      if (*click.conversion_minute <= m) {
        // Zero-delay conversion: bill now so admission stops exactly at the goal.
        settle_due(ledger, m);
        if (ledger.goal_reached()) {
          if (!out.goal_hit_minute) out.goal_hit_minute = m;
          state = mark_goal_reached(state);
        }
      }
    }
    out.spend_curve.push_back(ledger.recognized_spend());
    out.phase_trace.push_back(state.phase);
    out.throttle_trace.push_back(state.throttle_rate);
  }

  if (options.spill_to_next_day) {
    settle_due(ledger, kMinutesPerDay - 1);
    while (auto p = ledger.pop_due(std::numeric_limits<Minute>::max())) {
      out.spilled.push_back({p->due_minute - kMinutesPerDay, p->fee});
    }
  } else {
    settle_all(ledger);
  }
  if (!out.goal_hit_minute && ledger.goal_reached()) out.goal_hit_minute = spec.targeting_end;
  out.spend_curve.push_back(ledger.recognized_spend());
  return out;
}

SimulationResult simulate_day(const CampaignSpec& spec, const SffParams& params,
                              const CampaignHistory& history, PacingMode mode,
                              const TrafficModel& traffic, std::uint64_t seed,
                              const SimOptions& options) {
  validate_campaign(spec);
  const Date as_of = options.as_of.value_or(default_as_of(history));
  return simulate_plan(spec, resolve_plan(mode, spec, params, history, as_of, options), traffic,
                       seed, options);
}

std::vector<LoopDay> simulate_closed_loop(const CampaignSpec& spec, const SffParams& params,
                                          CampaignHistory& history, int days,
                                          const TrafficModel& traffic, std::uint64_t seed,
                                          const SimOptions& options, PacingMode mode) {
  if (days < 1) throw std::invalid_argument("days must be >= 1");
  validate_campaign(spec);
  if (mode == PacingMode::Sff) validate_params(params, spec);

  std::vector<LoopDay> out;
  out.reserve(static_cast<std::size_t>(days));
  const Date first = options.as_of.value_or(default_as_of(history));
  std::vector<PendingAttribution> carried;
  for (int d = 0; d < days; ++d) {
    const Date today = first + std::chrono::days{d};
    DayPlan plan;
    double candidate = 0.0;
    if (mode == PacingMode::Sff) {
      candidate = sff_candidate(history, params, today, options.sff);
      double start = candidate;
      if (options.sff.monotone_updates) {
        start = update_start_fraction(history, candidate, today, params);
      } else {
        history.set_start(candidate, today);
      }
      plan = {start, params.transition_window_minutes};
    } else {
      plan = resolve_plan(mode, spec, params, history, today, options);
      candidate = plan.start_fraction;
    }
    SimulationResult result =
        simulate_plan(spec, plan, traffic, day_seed(seed, d), options, carried);
    carried = result.spilled;
    history.append({today, result.final_ledger.recognized_spend(), spec.daily_goal});
    out.push_back(LoopDay{today, candidate, plan.start_fraction, std::move(result)});
  }
  return out;
}

}  // namespace pacekit
