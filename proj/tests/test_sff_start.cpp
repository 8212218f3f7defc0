#include <cmath>
#include <doctest.h>
#include <random>

#include "pacekit/sff_start.hpp"

using namespace pacekit;
using std::chrono::days;

namespace {

const Date kToday = parse_date("2024-06-01");

CampaignHistory history_of(const std::vector<std::pair<double, double>>& spend_goal) {
  CampaignHistory h;
  Date d = kToday - days{static_cast<int>(spend_goal.size())};
  for (auto [spend, goal] : spend_goal) {
    h.append({d, Money::from_units(spend), Money::from_units(goal)});
    d += days{1};
  }
  return h;
}

}  // namespace

TEST_CASE("overspend ratio examples") {
  CHECK(compute_overspend_ratio(history_of({{100, 100}, {110, 100}, {120, 100}}), 180, kToday)
            .value == doctest::Approx(1.10).epsilon(1e-12));
  CHECK(compute_overspend_ratio(history_of({{100, 100}}), 180, kToday).value == 1.0);
}

TEST_CASE("overspend ratio averaging modes differ on unequal goals") {
  const auto h = history_of({{100, 100}, {300, 200}});
  CHECK(compute_overspend_ratio(h, 180, kToday, RatioAveraging::MeanOfRatios).value ==
        doctest::Approx(1.25));
  CHECK(compute_overspend_ratio(h, 180, kToday, RatioAveraging::RatioOfTotals).value ==
        doctest::Approx(400.0 / 300.0));
}

TEST_CASE("overspend ratio respects the lookback window and skips idle days") {
  const auto h = history_of({{200, 100}, {0, 100}, {110, 100}});
  CHECK(compute_overspend_ratio(h, 2, kToday).value == doctest::Approx(1.10));
  CHECK(compute_overspend_ratio(h, 3, kToday).value == doctest::Approx(1.55));
  CHECK_THROWS_AS(compute_overspend_ratio(history_of({{0, 100}}), 180, kToday), NoHistory);
  CHECK_THROWS_AS(compute_overspend_ratio(CampaignHistory{}, 180, kToday), NoHistory);
  // Records on or after as_of are ignored.
  CHECK_THROWS_AS(compute_overspend_ratio(h, 180, kToday - days{3}), NoHistory);
}

TEST_CASE("180 uniform days average near 1.25") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  std::vector<std::pair<double, double>> rows;
  double sum = 0;
  for (int i = 0; i < 180; ++i) {
    const double spend = 1000.0 * (1.0 + u(gen));
    rows.emplace_back(spend, 1000.0);
    sum += Money::from_units(spend) / Money::from_units(1000);
  }
  const double got = compute_overspend_ratio(history_of(rows), 180, kToday).value;
  CHECK(got == doctest::Approx(sum / 180).epsilon(1e-12));
  const double sigma = (0.5 / std::sqrt(12.0)) / std::sqrt(180.0);
  CHECK(std::abs(got - 1.25) < 3 * sigma);
}

TEST_CASE("start fraction examples") {
  const SffParams p;
  CHECK(sff_start_fraction({1.03}, p) == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(sff_start_fraction({1.50}, p) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(sff_start_fraction({1.265}, p) ==
        doctest::Approx(0.85 + 0.1 * std::sqrt(0.235 / 0.47)).epsilon(1e-12));
  CHECK(sff_start_fraction({0.90}, p) == 0.85);
  CHECK(sff_start_fraction({3.0}, p) == doctest::Approx(0.95));
}

TEST_CASE("update rule examples") {
  const SffParams p;  // refresh every 7 days
  auto seeded = [&](double current, Date refreshed) {
    CampaignHistory h;
    h.set_start(current, refreshed);
    return h;
  };

  auto h = seeded(0.90, kToday - days{2});
  CHECK(update_start_fraction(h, 0.88, kToday, p) == 0.90);
  CHECK(h.current_start_fraction() == 0.90);

  h = seeded(0.90, kToday - days{2});
  CHECK(update_start_fraction(h, 0.93, kToday, p) == 0.93);
  CHECK(h.last_refresh_date() == kToday - days{2});

  h = seeded(0.90, kToday - days{7});
  CHECK(update_start_fraction(h, 0.88, kToday, p) == 0.88);
  CHECK(h.last_refresh_date() == kToday);

  CampaignHistory empty;
  CHECK(update_start_fraction(empty, 0.87, kToday, p) == 0.87);
  CHECK(empty.last_refresh_date() == kToday);
}
