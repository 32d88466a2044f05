#include <cmath>
#include <vector>

#include "commshare/cost.hpp"
#include "commshare/error.hpp"
#include "commshare/random.hpp"
#include "doctest.h"

using namespace commshare;

namespace {

SimulationTrace trace_of(std::vector<double> e_b, std::vector<double> e_s) {
  SimulationTrace tr;
  const std::size_t n = e_b.size();
  tr.p_bat.assign(n, 0.0);
  tr.soc.assign(n, 0.0);
  tr.p_grid.assign(n, 0.0);
  tr.e_b = std::move(e_b);
  tr.e_s = std::move(e_s);
  return tr;
}

// Midday generation bump over one day of 48 steps.
GenerationSeries daytime_generation(std::size_t days) {
  std::vector<double> g(days * 48);
  for (std::size_t t = 0; t < g.size(); ++t) {
    const double hour = static_cast<double>(t % 48) / 2.0;
    g[t] = std::max(0.0, 330.0 * std::sin((hour - 6.0) / 12.0 * 3.14159265358979));
  }
  return GenerationSeries(std::move(g));
}

}  // namespace

TEST_CASE("grid cost") {
  const auto tariffs = TariffSchedule::flat(16, 0);
  CHECK(grid_cost(trace_of({1, 1}, {0, 0}), tariffs) == doctest::Approx(0.32));
  CHECK(grid_cost(trace_of({0, 0}, {3, 2}), tariffs) == 0.0);
  CHECK(grid_cost(trace_of({0, 0}, {0, 0}), tariffs) == 0.0);
  CHECK(grid_cost(trace_of({0, 0}, {2, 0}), TariffSchedule::flat(16, 5)) == doctest::Approx(-0.10));

  TariffSchedule tou{{10, 30}, {0, 0}};
  CHECK(grid_cost(trace_of({1, 2}, {0, 0}), tou) == doctest::Approx(0.70));
  TariffSchedule wrong{{10, 20, 30}, {0}};
  CHECK_THROWS_AS(grid_cost(trace_of({1, 2}, {0, 0}), wrong), Error);
}

TEST_CASE("wind cost") {
  AssetConfig cfg;
  CHECK(wind_cost(0, cfg) == 0.0);
  CHECK(wind_cost(200, cfg) == doctest::Approx(21225.60));
  CHECK(wind_cost(100, cfg) == doctest::Approx(wind_cost(200, cfg) / 2));

  cfg.sizing = AssetSizing::fixed_community;
  cfg.community_size = 200;
  CHECK(wind_cost(3, cfg) == doctest::Approx(21225.60));
}

TEST_CASE("battery cost") {
  AssetConfig cfg;
  CHECK(battery_cost(1000, 1.0 / 25.0, cfg) == doctest::Approx(6000));
  CHECK(battery_cost(1000, 0.0, cfg) == doctest::Approx(7500));
  CHECK(battery_cost(1000, 1.0 / 10.0, cfg) == doctest::Approx(7500));
  CHECK(battery_cost(0, 0.3, cfg) == 0.0);
}

TEST_CASE("coalition cost components") {
  const CoalitionCostModel model(daytime_generation(7), BatteryTemplate{}, TariffSchedule::flat(16, 0), AssetConfig{});
  const DemandMatrix m({"a", "b", "c"}, {std::vector<double>(7 * 48, 0.5), std::vector<double>(7 * 48, 1.0),
                                         std::vector<double>(7 * 48, 0.2)});

  const auto empty = model.coalition_cost(m, std::vector<std::size_t>{});
  CHECK(empty.total == 0.0);

  const auto c = model.coalition_cost(m, std::vector<std::size_t>{2, 0});
  CHECK(c.total == c.grid + c.wind + c.battery);
  CHECK(c.wind >= 0.0);
  CHECK(c.battery >= 0.0);
  CHECK(model.coalition_cost(m, std::vector<std::size_t>{0, 2}).total == c.total);
  CHECK_THROWS_AS(model.coalition_cost(m, std::vector<std::size_t>{0, 0}), Error);
}

TEST_CASE("zero demand costs only amortisation and grows linearly") {
  const CoalitionCostModel model(GenerationSeries(std::vector<double>(96, 0.0)), BatteryTemplate{},
                                 TariffSchedule::flat(16, 0), AssetConfig{});
  const std::vector<double> zero(96, 0.0);
  const auto one = model.evaluate(zero, 1);
  CHECK(one.grid == 0.0);
  CHECK(one.total == doctest::Approx(wind_cost(1, AssetConfig{}) + battery_cost(5, 0, AssetConfig{})));
  for (std::size_t n : {2u, 5u, 40u}) CHECK(model.evaluate(zero, n).total == doctest::Approx(n * one.total));
}

TEST_CASE("cost matches an independent simulate and rainflow pass") {
  RandomStream rng(21, 3);
  const auto gen = daytime_generation(30);
  const CoalitionCostModel model(gen, BatteryTemplate{}, TariffSchedule::flat(16, 4), AssetConfig{});
  std::vector<double> d(gen.size());
  for (double& v : d) v = 2.0 * rng.uniform();

  const std::size_t size = 3;
  const auto cost = model.evaluate(d, size);

  const BatterySpec spec = BatteryTemplate{}.sized(5.0 * size);
  std::vector<double> g(gen.size());
  for (std::size_t t = 0; t < g.size(); ++t) g[t] = 0.006 * size * gen[t];
  const auto tr = simulate(d, g, spec, 0.5);
  std::vector<double> soc_pct{spec.soc_init_kwh() / spec.soc_max_kwh() * 100.0};
  for (double s : tr.soc) soc_pct.push_back(s / spec.soc_max_kwh() * 100.0);
  const double df = depreciation_factor(rainflow_count(soc_pct), CycleLifeTable::default_lithium());

  CHECK(cost.df == doctest::Approx(df).epsilon(1e-12));
  CHECK(cost.grid == doctest::Approx(grid_cost(tr, TariffSchedule::flat(16, 4))).epsilon(1e-12));
  CHECK(cost.battery == doctest::Approx(battery_cost(spec.capacity_kwh, df, AssetConfig{})).epsilon(1e-12));
}

TEST_CASE("complementary loads share assets profitably") {
  // One daytime and one night-time load against daytime generation.
  const std::size_t T = 7 * 48;
  std::vector<double> day(T), night(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double hour = static_cast<double>(t % 48) / 2.0;
    const bool daylight = hour >= 8 && hour < 17;
    day[t] = daylight ? 1.5 : 0.1;
    night[t] = daylight ? 0.1 : 1.5;
  }
  const CoalitionCostModel model(daytime_generation(7), BatteryTemplate{}, TariffSchedule::flat(16, 0), AssetConfig{});
  const DemandMatrix m({"day", "night"}, {day, night});
  const double both = model.coalition_cost(m, std::vector<std::size_t>{0, 1}).total;
  const double apart = model.coalition_cost(m, std::vector<std::size_t>{0}).total +
                       model.coalition_cost(m, std::vector<std::size_t>{1}).total;
  CHECK(both <= apart);
}

TEST_CASE("scaling demand up never lowers the grid cost") {
  RandomStream rng(4, 4);
  const auto gen = daytime_generation(14);
  const CoalitionCostModel model(gen, BatteryTemplate{}, TariffSchedule::flat(16, 0), AssetConfig{});
  std::vector<double> d(gen.size());
  for (double& v : d) v = rng.uniform();
  double prev = model.evaluate(d, 2).grid;
  for (double lambda : {1.1, 1.5, 3.0}) {
    std::vector<double> scaled = d;
    for (double& v : scaled) v *= lambda;
    const double now = model.evaluate(scaled, 2).grid;
    CHECK(now >= prev - 1e-9);
    prev = now;
  }
}

TEST_CASE("model validation") {
  AssetConfig bad;
  bad.battery_cost_per_kwh = 0;
  CHECK_THROWS_AS(CoalitionCostModel(GenerationSeries({1.0}), BatteryTemplate{}, TariffSchedule{}, bad), Error);
  const CoalitionCostModel model(GenerationSeries({1.0, 2.0}), BatteryTemplate{}, TariffSchedule{}, AssetConfig{});
  CHECK_THROWS_AS(model.evaluate(std::vector<double>{1.0}, 1), Error);
}
