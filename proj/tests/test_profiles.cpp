#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include "commshare/error.hpp"
#include "commshare/profiles.hpp"
#include "commshare/random.hpp"
#include "doctest.h"

using namespace commshare;
using namespace std::chrono;

namespace {

double norm(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

// Half-hourly series for `days` days whose value encodes the day index.
std::vector<double> day_coded(std::size_t days) {
  std::vector<double> s(days * 48);
  for (std::size_t t = 0; t < s.size(); ++t) s[t] = static_cast<double>(t / 48);
  return s;
}

}  // namespace

TEST_CASE("l2 normalisation") {
  const auto v = l2_normalize(std::vector<double>{3, 4});
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
  const auto unit = l2_normalize(std::vector<double>{0, 1, 0});
  CHECK(unit == std::vector<double>{0, 1, 0});
  const auto once = l2_normalize(std::vector<double>{0.3, 7.1, 2.2, 0.01});
  const auto twice = l2_normalize(once);
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(std::abs(once[i] - twice[i]) <= 1e-12);
  CHECK(norm(once) == doctest::Approx(1.0).epsilon(1e-14));
  try {
    l2_normalize(std::vector<double>{0, 0});
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVector);
  }
}

TEST_CASE("winter weekday filter") {
  CHECK(is_retained_winter_weekday(2013y / January / 8));    // Tuesday
  CHECK(!is_retained_winter_weekday(2013y / January / 5));   // holiday window
  CHECK(!is_retained_winter_weekday(2013y / January / 12));  // Saturday
  CHECK(!is_retained_winter_weekday(2013y / January / 11));  // Friday
  CHECK(!is_retained_winter_weekday(2013y / December / 23)); // holiday window
  CHECK(is_retained_winter_weekday(2013y / December / 19));  // Thursday
  CHECK(!is_retained_winter_weekday(2013y / July / 2));

  const auto year = filter_winter_weekdays(day_coded(365), 2013y / January / 1);
  CHECK(year.size() == 60);
  std::size_t points = 0;
  for (const auto& r : year.rows) points += r.size();
  CHECK(points == 2880);
  // Row content follows its calendar day.
  const auto first = sys_days{year.days.front()} - sys_days{2013y / January / 1};
  CHECK(year.rows.front().front() == static_cast<double>(first.count()));

  const auto july = filter_winter_weekdays(day_coded(31), 2013y / July / 1);
  CHECK(july.size() == 0);

  CHECK_THROWS_AS(filter_winter_weekdays(std::vector<double>(47, 1.0), 2013y / January / 1), Error);
}

TEST_CASE("daily mean profile") {
  DailyProfiles p;
  p.rows = {std::vector<double>(48, 1.0), std::vector<double>(48, 3.0)};
  p.days = {2013y / January / 8, 2013y / January / 9};
  const auto mean = daily_mean_profile(p);
  CHECK(mean.size() == 48);
  for (double v : mean) CHECK(v == 2.0);
  CHECK_THROWS_AS(daily_mean_profile(DailyProfiles{}), Error);
}

TEST_CASE("coverage filter") {
  RawDemand raw;
  raw.agent_ids = {"full", "gappy"};
  raw.rows = {std::vector<double>(100, 1.0), std::vector<double>(100, 1.0)};
  for (int t = 0; t < 6; ++t) raw.rows[1][10 + t] = kMissing;
  const auto kept = filter_by_coverage(raw, 0.95);
  CHECK(kept.agent_ids == std::vector<std::string>{"full"});
  CHECK(filter_by_coverage(raw, 0.90).agent_ids.size() == 2);
}

TEST_CASE("kmeans separates distinct clouds") {
  RandomStream rng(3, 3);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 20; ++i) {
    const double cx = i < 10 ? 0.0 : 10.0;
    rows.push_back({cx + 0.1 * rng.normal(), cx + 0.1 * rng.normal()});
  }
  const auto model = kmeans(rows, 2, 1);
  for (int i = 1; i < 10; ++i) CHECK(model.assignments[i] == model.assignments[0]);
  for (int i = 11; i < 20; ++i) CHECK(model.assignments[i] == model.assignments[10]);
  CHECK(model.assignments[0] != model.assignments[10]);
  for (std::size_t i = 1; i < model.inertia_history.size(); ++i)
    CHECK(model.inertia_history[i] <= model.inertia_history[i - 1] + 1e-12);
}

TEST_CASE("kmeans degenerate cases") {
  const std::vector<std::vector<double>> rows{{0, 1}, {2, 3}, {5, 5}, {-1, 4}};
  CHECK(kmeans(rows, 4, 7).inertia == doctest::Approx(0.0));

  const std::vector<std::vector<double>> same(5, std::vector<double>{1.0, 2.0});
  const auto m = kmeans(same, 2, 7);
  CHECK(m.inertia == 0.0);
  for (std::size_t a : m.assignments) CHECK(a < 2);

  try {
    kmeans(rows, 5, 1);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KTooLarge);
  }
}

TEST_CASE("kmeans is deterministic for a seed") {
  RandomStream rng(8, 0);
  std::vector<std::vector<double>> rows(60, std::vector<double>(48));
  for (auto& r : rows)
    for (double& v : r) v = rng.uniform();
  const auto a = kmeans(rows, 5, 42);
  const auto b = kmeans(rows, 5, 42);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centroids == b.centroids);
  CHECK(a.inertia == b.inertia);
  for (std::size_t i = 1; i < a.inertia_history.size(); ++i)
    CHECK(a.inertia_history[i] <= a.inertia_history[i - 1] + 1e-12);
}

TEST_CASE("class profile synthesis preserves the community total") {
  const std::vector<double> shape{1, 2, 3, 4};
  const auto one = synthesize_class_profiles({shape}, std::vector<std::size_t>{5}, 100.0);
  CHECK(one[0][0] == doctest::Approx(100.0 / (5 * 10)));

  const std::vector<std::vector<double>> shapes{{0.1, 0.5, 0.2}, {0.9, 0.1, 0.4}, {0.3, 0.3, 0.3}};
  const std::vector<std::size_t> sizes{120, 50, 30};
  const auto out = synthesize_class_profiles(shapes, sizes, 4321.0, 0.5);
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
    for (double v : out[k]) total += static_cast<double>(sizes[k]) * v * 0.5;
  CHECK(std::abs(total - 4321.0) <= 1e-9 * 4321.0);

  const std::vector<std::size_t> doubled{240, 100, 60};
  const auto out2 = synthesize_class_profiles(shapes, doubled, 2 * 4321.0, 0.5);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t t = 0; t < 3; ++t) CHECK(out2[k][t] == doctest::Approx(out[k][t]).epsilon(1e-14));

  try {
    synthesize_class_profiles({{0, 0}}, std::vector<std::size_t>{3}, 10.0);
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}

TEST_CASE("archetype shapes and annual energy") {
  for (auto a : {Archetype::evening_peak, Archetype::stay_at_home, Archetype::m_shape, Archetype::night_owl}) {
    const auto shape = archetype_daily_shape(a);
    CHECK(shape.size() == 48);
    CHECK(std::accumulate(shape.begin(), shape.end(), 0.0) / 48.0 == doctest::Approx(1.0));
    CHECK(parse_archetype(to_string(a)) == a);
    const auto year = archetype_profile(a, 3500.0);
    CHECK(std::accumulate(year.begin(), year.end(), 0.0) * 0.5 == doctest::Approx(3500.0 * 8760.0 / 8760.0));
  }
  const auto peak = archetype_daily_shape(Archetype::evening_peak);
  CHECK(std::max_element(peak.begin(), peak.end()) - peak.begin() >= 34);  // after 17:00
  CHECK_THROWS_AS(parse_archetype("morning_lark"), Error);
}

TEST_CASE("synthetic community") {
  SyntheticSpec spec;
  spec.classes = {{"small", Archetype::evening_peak, 9, 3000.0}, {"large", Archetype::stay_at_home, 1, 9000.0}};
  spec.timesteps = 48 * 10;
  spec.seed = 5;
  const auto a = generate_synthetic_community(spec);
  const auto b = generate_synthetic_community(spec);
  CHECK(a.demands.agents() == 10);
  CHECK(a.demands.agent_ids().front() == "small_1");
  for (std::size_t i = 0; i < 10; ++i) {
    const auto ra = a.demands.row(i), rb = b.demands.row(i);
    CHECK(std::equal(ra.begin(), ra.end(), rb.begin()));
  }
  CHECK(a.classes.size(0) == 9);
  CHECK(a.agent_class.back() == 1);

  spec.noise = 0.0;
  const auto clean = generate_synthetic_community(spec);
  for (std::size_t i = 1; i < 9; ++i) {
    const auto r0 = clean.demands.row(0), ri = clean.demands.row(i);
    CHECK(std::equal(r0.begin(), r0.end(), ri.begin()));
  }
}

TEST_CASE("day and night classes peak at different times") {
  SyntheticSpec spec;
  spec.classes = {{"day", Archetype::stay_at_home, 3, 4000.0}, {"night", Archetype::night_owl, 3, 4000.0}};
  spec.timesteps = 48 * 7;
  spec.noise = 0.0;
  const auto c = generate_synthetic_community(spec);
  const auto day = c.classes.demand(0), night = c.classes.demand(1);
  double peak_sum = 0.0, peak_day = 0.0, peak_night = 0.0;
  for (std::size_t t = 0; t < day.size(); ++t) {
    peak_day = std::max(peak_day, day[t]);
    peak_night = std::max(peak_night, night[t]);
    peak_sum = std::max(peak_sum, day[t] + night[t]);
  }
  CHECK(peak_sum < peak_day + peak_night);
}

TEST_CASE("synthetic wind") {
  const auto speeds = synthetic_wind_speeds(kYearTimesteps, 7, 7.0);
  const double mean = std::accumulate(speeds.begin(), speeds.end(), 0.0) / speeds.size();
  CHECK(mean == doctest::Approx(7.0).epsilon(0.1));
  for (double v : speeds) CHECK(v >= 0.0);
  CHECK(synthetic_wind_speeds(100, 7) == synthetic_wind_speeds(100, 7));
  CHECK(synthetic_wind_speeds(100, 7) != synthetic_wind_speeds(100, 8));
  const auto g = synthetic_turbine_output(1000, 7);
  for (double v : g.values()) CHECK(v <= 330.0);
}
