#pragma once

#include <stdexcept>

#include "pacekit/model.hpp"

namespace pacekit {

// Raised when no usable history record falls inside the lookback window.
class NoHistory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RatioAveraging {
  MeanOfRatios,   // mean over days of spend/goal
  RatioOfTotals,  // total spend / total goal
};

struct SffOptions {
  int lookback_days = 180;
  RatioAveraging averaging = RatioAveraging::MeanOfRatios;
  // Diagnostic switch: when false, every day's candidate is adopted as-is and
  // the closed loop is free to oscillate.
  bool monotone_updates = true;
};

// Historical mean of actual spend over the daily goal.
struct OverspendRatio {
  double value = 0.0;
};

// Averages records dated in [as_of - lookback_days, as_of). Days with zero spend
// are skipped. Throws NoHistory when nothing usable remains.
OverspendRatio compute_overspend_ratio(const CampaignHistory& history, int lookback_days,
                                       Date as_of,
                                       RatioAveraging averaging = RatioAveraging::MeanOfRatios);

// Start of fast finish as a fraction of the targeting window:
//
//   D = (max_start - min_start) / sqrt(max_or - min_or)
//   t = D * sqrt(clamp(or, min_or, max_or) - min_or) + min_start
//
// Always in [min_start, max_start].
double sff_start_fraction(OverspendRatio ratio, const SffParams& params);

// Applies the later-only rule. On a refresh day (or when nothing is stored yet)
// the candidate is adopted verbatim and the refresh date moves to `today`;
// otherwise the stored fraction can only move later. Updates `history` and
// returns the fraction in force for `today`.
double update_start_fraction(CampaignHistory& history, double candidate, Date today,
                             const SffParams& params);

}  // namespace pacekit
