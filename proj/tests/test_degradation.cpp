#include <algorithm>
#include <cmath>
#include <vector>

#include "commshare/degradation.hpp"
#include "commshare/error.hpp"
#include "commshare/random.hpp"
#include "doctest.h"

using namespace commshare;

namespace {

std::vector<Cycle> count(std::vector<double> soc) { return rainflow_count(soc); }

// Knots chosen so the interpolated lookups hit round numbers.
CycleLifeTable synthetic_table() { return CycleLifeTable({{20, 10000}, {50, 4000}, {70, 2000}, {100, 1000}}); }

}  // namespace

TEST_CASE("single excursion from full is a regular full cycle") {
  const auto c = count({100, 40, 100});
  REQUIRE(c.size() == 1);
  CHECK(c[0].kind == CycleKind::full);
  CHECK(c[0].regularity == Regularity::regular);
  CHECK(c[0].dod_percent == doctest::Approx(60));
}

TEST_CASE("excursion below full is irregular") {
  const auto c = count({80, 30, 80});
  REQUIRE(c.size() == 1);
  CHECK(c[0].kind == CycleKind::full);
  CHECK(c[0].regularity == Regularity::irregular);
  CHECK(c[0].dod_percent == doctest::Approx(50));
  CHECK(c[0].soc_start_percent == doctest::Approx(80));
}

TEST_CASE("nested cycles") {
  auto c = count({100, 50, 80, 20, 100});
  REQUIRE(c.size() == 2);
  std::sort(c.begin(), c.end(), [](const Cycle& a, const Cycle& b) { return a.dod_percent < b.dod_percent; });
  CHECK(c[0].kind == CycleKind::full);
  CHECK(c[0].dod_percent == doctest::Approx(30));
  CHECK(c[0].regularity == Regularity::irregular);
  CHECK(c[1].kind == CycleKind::full);
  CHECK(c[1].dod_percent == doctest::Approx(80));
  CHECK(c[1].regularity == Regularity::regular);
}

TEST_CASE("open history leaves half cycles") {
  const auto c = count({10, 90, 40});
  REQUIRE(c.size() == 2);
  for (const auto& cy : c) CHECK(cy.kind == CycleKind::half);
  CHECK(c[0].dod_percent == doctest::Approx(80));
  CHECK(c[1].dod_percent == doctest::Approx(50));
}

TEST_CASE("plateaus and monotone runs collapse") {
  CHECK(extract_reversals(std::vector<double>{10, 20, 30, 30, 20, 20, 50}) == std::vector<double>{10, 30, 20, 50});
  CHECK(count({}).empty());
  CHECK(count({55}).empty());
}

TEST_CASE("dod_equivalent") {
  CHECK(dod_equivalent(100) == 0);
  CHECK(dod_equivalent(30) == 70);
  CHECK(dod_equivalent(0) == 100);
  CHECK_THROWS_AS(dod_equivalent(120), Error);
}

TEST_CASE("depreciation factor examples") {
  const auto table = synthetic_table();
  CHECK(depreciation_factor(std::vector<Cycle>{}, table) == 0.0);

  Cycle regular;
  regular.kind = CycleKind::full;
  regular.regularity = Regularity::regular;
  regular.dod_percent = 50;
  regular.soc_start_percent = 100;
  regular.soc_end_percent = 50;
  CHECK(depreciation_factor(std::vector<Cycle>{regular}, table) == doctest::Approx(2.5e-4).epsilon(1e-12));

  Cycle half;
  half.kind = CycleKind::half;
  half.regularity = Regularity::irregular;
  half.soc_start_percent = 80;
  half.soc_end_percent = 30;
  half.dod_percent = 50;
  CHECK(depreciation_factor(std::vector<Cycle>{half}, table) == doctest::Approx(2.0e-4).epsilon(1e-12));

  CHECK_THROWS_AS(depreciation_factor(std::vector<Cycle>{regular}, CycleLifeTable{}), Error);
}

TEST_CASE("regular cycles count the same in either direction") {
  const auto table = CycleLifeTable::default_lithium();
  const double down_up = depreciation_factor(count({100, 35, 100}), table);
  const double up_down = depreciation_factor(count({35, 100, 35}), table);
  CHECK(down_up == doctest::Approx(1.0 / (300000.0 / 65.0)));
  CHECK(down_up > 0.0);
  CHECK(up_down > 0.0);
}

TEST_CASE("splitting an open trace at a full level is additive") {
  const auto table = CycleLifeTable::default_lithium();
  RandomStream rng(5, 1);
  for (int run = 0; run < 30; ++run) {
    std::vector<double> left{30.0 + 40.0 * rng.uniform()};
    for (int i = 0; i < 15; ++i) left.push_back(100.0 * rng.uniform());
    left.push_back(100.0);
    std::vector<double> right{100.0};
    for (int i = 0; i < 15; ++i) right.push_back(100.0 * rng.uniform());
    right.push_back(30.0 + 40.0 * rng.uniform());

    std::vector<double> whole = left;
    whole.insert(whole.end(), right.begin() + 1, right.end());
    const double sum = depreciation_factor(rainflow_count(left), table) + depreciation_factor(rainflow_count(right), table);
    CHECK(std::abs(depreciation_factor(rainflow_count(whole), table) - sum) <= 1e-12);
  }
}

TEST_CASE("cycle life table interpolates and clamps") {
  const auto table = synthetic_table();
  CHECK(table.max_cycles(35) == doctest::Approx(7000));
  CHECK(table.max_cycles(5) == 10000);
  CHECK(table.max_cycles(150) == 1000);
  CHECK_THROWS_AS(CycleLifeTable({{10, 100}, {20, 200}}), Error);
  CHECK_THROWS_AS(CycleLifeTable({{10, 100}, {10, 50}}), Error);
  CHECK(CycleLifeTable::default_lithium().max_cycles(100) == doctest::Approx(3000));
}
