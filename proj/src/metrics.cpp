#include "pacekit/metrics.hpp"

#include <algorithm>

namespace pacekit {

double live_hours(const SimulationResult& result, const CampaignSpec& spec,
                  LiveHoursBasis basis) {
  const Minute origin = basis == LiveHoursBasis::Midnight ? 0 : spec.targeting_start;
  const Minute end = result.goal_hit_minute.value_or(spec.targeting_end);
  return (end - origin) / 60.0;
}

double overdelivery_rate(const SimulationResult& result, const CampaignSpec& spec) {
  return result.final_ledger.overdelivery_spend() / spec.daily_goal;
}

CampaignMetrics campaign_metrics(const SimulationResult& result, const CampaignSpec& spec,
                                 LiveHoursBasis basis) {
  return {live_hours(result, spec, basis), overdelivery_rate(result, spec),
          result.final_ledger.recognized_spend(), result.goal_hit_minute.has_value()};
}

DistributionSummary summarize_values(std::span<const double> values,
                                     std::span<const double> edges) {
  if (values.empty()) throw EmptyGroup("cannot summarize an empty group");
  if (!std::is_sorted(edges.begin(), edges.end())) {
    throw std::invalid_argument("histogram edges must be sorted");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  DistributionSummary s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(sorted.size());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  s.histogram.edges.assign(edges.begin(), edges.end());
  s.histogram.counts.assign(edges.size() + 1, 0);
  for (double v : sorted) {
    const auto bucket = std::upper_bound(edges.begin(), edges.end(), v) - edges.begin();
    ++s.histogram.counts[static_cast<std::size_t>(bucket)];
  }
  return s;
}

MetricsSummary summarize(std::span<const CampaignMetrics> group, const SummaryBuckets& buckets) {
  if (group.empty()) throw EmptyGroup("cannot summarize an empty group");
  std::vector<double> hours;
  std::vector<double> over;
  hours.reserve(group.size());
  over.reserve(group.size());
  for (const auto& m : group) {
    hours.push_back(m.live_hours);
    over.push_back(m.overdelivery_rate);
  }
  return {summarize_values(hours, buckets.live_hours_edges),
          summarize_values(over, buckets.overdelivery_edges)};
}

}  // namespace pacekit
