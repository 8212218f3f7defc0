#include "pacekit/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace pacekit {
namespace {

int poisson_count(double mean, Minute minute, const RandomStream& stream) {
  // Count unit-rate exponential arrivals that fit inside `mean`.
  if (mean <= 0.0) return 0;
  double t = 0.0;
  int k = 0;
  for (;;) {
    t -= std::log1p(-stream.uniform(static_cast<std::uint64_t>(minute), k));
    if (t > mean) return k;
    ++k;
  }
}

}  // namespace

void validate_traffic(const TrafficModel& model) {
  std::vector<SpecViolation> v;
  if (!(model.rate >= 0.0) || !std::isfinite(model.rate)) v.push_back({"traffic.rate", "must be >= 0"});
  Minute prev = -1;
  for (const auto& seg : model.profile) {
    if (!(seg.rate >= 0.0) || !std::isfinite(seg.rate)) {
      v.push_back({"traffic.profile", "rates must be >= 0"});
    }
    if (seg.start_minute <= prev || seg.start_minute < 0 || seg.start_minute >= kMinutesPerDay) {
      v.push_back({"traffic.profile", "segment starts must increase within [0, 1440)"});
    }
    prev = seg.start_minute;
  }
  if (model.kind == TrafficKind::Piecewise && model.profile.empty()) {
    v.push_back({"traffic.profile", "piecewise traffic needs at least one segment"});
  }
  if (!(model.win_probability >= 0.0 && model.win_probability <= 1.0)) {
    v.push_back({"traffic.win_probability", "must lie in [0, 1]"});
  }
  if (!(model.win_noise >= 0.0 && model.win_noise <= 1.0)) {
    v.push_back({"traffic.win_noise", "must lie in [0, 1]"});
  }
  if (!v.empty()) throw InvalidSpec(std::move(v));
}

double rate_at(const TrafficModel& model, Minute minute) {
  if (model.profile.empty()) return model.rate;
  double r = 0.0;
  for (const auto& seg : model.profile) {
    if (seg.start_minute > minute) break;
    r = seg.rate;
  }
  return r;
}

int requests_at(const TrafficModel& model, Minute minute, const RandomStream& stream) {
  const double r = rate_at(model, minute);
  switch (model.kind) {
    case TrafficKind::Constant:
    case TrafficKind::Piecewise:
      return static_cast<int>(std::lround(r));
    case TrafficKind::Poisson:
      return poisson_count(r, minute, stream);
  }
  return 0;
}

double noisy_win_probability(double win_probability, double noise_half_width, double u) {
  return std::clamp(win_probability + (2.0 * u - 1.0) * noise_half_width, 0.0, 1.0);
}

bool auction_win(double win_probability, double u) { return u < win_probability; }

}  // namespace pacekit
