#pragma once

#include <vector>

#include "pacekit/model.hpp"
#include "pacekit/random.hpp"

namespace pacekit {

enum class TrafficKind { Constant, Piecewise, Poisson };

// Rate in force from `start_minute` until the next segment.
struct RateSegment {
  Minute start_minute = 0;
  double rate = 0.0;
};

struct TrafficModel {
  TrafficKind kind = TrafficKind::Constant;
  // Requests per minute. Constant rounds it to an integer count; Poisson uses
  // it as the mean. Ignored when `profile` is non-empty.
  double rate = 0.0;
  // Per-minute rate profile for Piecewise (integer counts) and Poisson (means).
  std::vector<RateSegment> profile;
  double win_probability = 0.5;
  // Half-width of the uniform perturbation added to win_probability per request.
  double win_noise = 0.05;
};

void validate_traffic(const TrafficModel& model);

double rate_at(const TrafficModel& model, Minute minute);

// Number of ad requests arriving in `minute`; a pure function of the model,
// minute and stream.
int requests_at(const TrafficModel& model, Minute minute, const RandomStream& stream);

double noisy_win_probability(double win_probability, double noise_half_width, double u);

bool auction_win(double win_probability, double u);

}  // namespace pacekit
