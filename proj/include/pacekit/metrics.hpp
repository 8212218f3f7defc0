#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pacekit/model.hpp"
#include "pacekit/simulator.hpp"

namespace pacekit {

class EmptyGroup : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LiveHoursBasis {
  TargetingStart,  // serving time since the targeting window opened
  Midnight,        // wall-clock hour of the day
};

struct CampaignMetrics {
  double live_hours = 0.0;
  double overdelivery_rate = 0.0;
  Money total_spend;
  bool goal_hit = false;
};

// Hours until the goal was hit; the full targeting span when it never was.
double live_hours(const SimulationResult& result, const CampaignSpec& spec,
                  LiveHoursBasis basis = LiveHoursBasis::TargetingStart);

// max(0, recognized / goal - 1), computed as overdelivery_spend / goal.
double overdelivery_rate(const SimulationResult& result, const CampaignSpec& spec);

CampaignMetrics campaign_metrics(const SimulationResult& result, const CampaignSpec& spec,
                                 LiveHoursBasis basis = LiveHoursBasis::TargetingStart);

// counts[0] is (-inf, edges[0]); counts[i] is [edges[i-1], edges[i]); the last
// bucket is [edges.back(), +inf).
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

struct DistributionSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  Histogram histogram;
};

// Order-independent: values are sorted before summing. Throws EmptyGroup.
DistributionSummary summarize_values(std::span<const double> values,
                                     std::span<const double> edges);

struct SummaryBuckets {
  std::vector<double> live_hours_edges{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24};
  std::vector<double> overdelivery_edges{0.0, 0.01, 0.02, 0.04, 0.06, 0.08,
                                         0.10, 0.12, 0.15, 0.20};
  std::vector<double> delta_live_hours_edges{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
};

struct MetricsSummary {
  DistributionSummary live_hours;
  DistributionSummary overdelivery_rate;
};

MetricsSummary summarize(std::span<const CampaignMetrics> group, const SummaryBuckets& buckets = {});

}  // namespace pacekit
