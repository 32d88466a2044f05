#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "commshare/error.hpp"
#include "commshare/experiments.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commshare;

namespace {

// Two weeks keeps a 20-point sweep to a second or so.
ScenarioConfig short_config() {
  ScenarioConfig cfg = ScenarioConfig::defaults();
  cfg.sweep.timesteps = 48 * 14;
  cfg.sampler.samples_per_agent = 200;
  return cfg;
}

std::size_t count_rows(const std::vector<std::string>& lines, const std::string& method) {
  return static_cast<std::size_t>(std::count_if(lines.begin(), lines.end(), [&](const std::string& l) {
    return l.find("," + method + ",") != std::string::npos;
  }));
}

}  // namespace

TEST_CASE("largest remainder sizing") {
  CHECK(largest_remainder_sizes(10, {0.9, 0.1}) == std::vector<std::size_t>{9, 1});
  CHECK(largest_remainder_sizes(10, {0.3, 0.7}) == std::vector<std::size_t>{3, 7});
  CHECK(largest_remainder_sizes(15, {0.9, 0.1}) == std::vector<std::size_t>{14, 1});
  CHECK(largest_remainder_sizes(10, {1.0 / 3, 1.0 / 3, 1.0 / 3}) == std::vector<std::size_t>{4, 3, 3});
  CHECK(largest_remainder_sizes(7, {0.5, 0.0, 0.5}) == std::vector<std::size_t>{4, 0, 3});
  for (std::size_t n : {1, 13, 199, 200}) {
    const auto s = largest_remainder_sizes(n, {0.45, 0.35, 0.2});
    CHECK(std::accumulate(s.begin(), s.end(), std::size_t{0}) == n);
  }
  CHECK_THROWS_AS(largest_remainder_sizes(10, {0.5, 0.4}), Error);
  CHECK_THROWS_AS(largest_remainder_sizes(10, {}), Error);
  CHECK_THROWS_AS(largest_remainder_sizes(10, {1.2, -0.2}), Error);
}

TEST_CASE("size sweep produces one row per method and point") {
  const auto cfg = short_config();
  const auto report = run_size_sweep(cfg);
  REQUIRE(report.points.size() == 20);
  for (const auto& p : report.points) {
    CHECK(p.methods.size() == 4);
    CHECK(p.class_sizes[0] + p.class_sizes[1] == p.n);
    CHECK(p.table_evaluations == (p.class_sizes[0] + 1) * (p.class_sizes[1] + 1));
    const auto& exact = p.methods.front();
    CHECK(exact.method == Method::exact_kclass);
    CHECK(exact.average_rd_percent == 0.0);
    for (const auto& m : p.methods) CHECK(m.efficiency_residual <= 1e-9 * p.community_total);
  }

  testing::TempDir dir;
  emit_report(report, dir.path());
  const auto rd = testing::read_lines(dir / "relative_differences.csv");
  CHECK(rd.front() == "point,n,composition,method,average_rd_percent");
  for (const char* m : {"exact_kclass", "marginal_contribution", "sev", "adaptive_sampling"})
    CHECK(count_rows(rd, m) == 20);
  CHECK(testing::read_lines(dir / "summary.csv").size() == 1 + 20 * 4);
  CHECK(testing::read_lines(dir / "allocations.csv").size() == 1 + 20 * 4 * 2);
  CHECK(testing::read_file(dir / "rd_vs_size.svg").find("<svg") != std::string::npos);
}

TEST_CASE("one class has nothing to approximate") {
  auto cfg = short_config();
  cfg.sweep.classes.resize(1);
  cfg.sweep.composition = {1.0};
  cfg.sweep.sizes = {5, 12};
  const auto report = run_size_sweep(cfg);
  for (const auto& p : report.points) {
    for (const auto& m : p.methods) {
      CHECK(m.average_rd_percent == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(*m.costs[0] == doctest::Approx(p.community_total / p.n).epsilon(1e-12));
    }
  }
}

TEST_CASE("composition sweep") {
  auto cfg = short_config();
  cfg.sweep.composition_fixed_n = 40;
  cfg.sweep.methods = {SweepMethod::exact, SweepMethod::mc};
  const auto report = run_composition_sweep(cfg);
  REQUIRE(report.points.size() == 13);
  CHECK(report.points.front().class_sizes == std::vector<std::size_t>{36, 4});
  CHECK(report.points.back().class_sizes == std::vector<std::size_t>{12, 28});
  for (const auto& p : report.points) CHECK(p.n == 40);

  testing::TempDir dir;
  emit_report(report, dir.path());
  CHECK(testing::read_lines(dir / "relative_differences.csv").size() == 1 + 13 * 2);
  CHECK(testing::read_file(dir / "rd_vs_composition.svg").find("</svg>") != std::string::npos);

  // Shifting the other way runs off the simplex.
  cfg.sweep.composition_pair[0] = 1;
  cfg.sweep.composition_pair[1] = 0;
  try {
    run_composition_sweep(cfg);
    FAIL("expected InfeasibleComposition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleComposition);
  }
}

TEST_CASE("a class that empties out is left out of the point") {
  auto cfg = short_config();
  cfg.sweep.composition_fixed_n = 20;
  cfg.sweep.composition_pair[0] = 1;
  cfg.sweep.composition_pair[1] = 0;
  cfg.sweep.composition_step = 0.1;
  cfg.sweep.composition_points = 2;
  const auto report = run_composition_sweep(cfg);
  const auto& last = report.points.back();
  CHECK(last.class_sizes == std::vector<std::size_t>{20, 0});
  for (const auto& m : last.methods) {
    CHECK(!m.costs[1]);
    CHECK(!m.rd_percent[1]);
  }
  testing::TempDir dir;
  emit_report(report, dir.path());
  for (const auto& line : testing::read_lines(dir / "allocations.csv")) CHECK(line.find(",large,0,") == std::string::npos);
}

TEST_CASE("report files are reproducible") {
  auto cfg = short_config();
  cfg.sweep.sizes = {10, 30};
  testing::TempDir a, b;
  emit_report(run_size_sweep(cfg), a.path());
  emit_report(run_size_sweep(cfg), b.path());
  for (const char* f : {"allocations.csv", "relative_differences.csv", "summary.csv", "rd_vs_size.svg"})
    CHECK(testing::read_file(a / f) == testing::read_file(b / f));
  const auto t = testing::read_lines(a / "timings.csv");
  CHECK(t.front() == "point,n,stage,wall_seconds");
  CHECK(t.size() == 1 + 2 * 5);
}

TEST_CASE("an empty report still writes headers") {
  ExperimentReport empty;
  empty.class_names = {"small", "large"};
  testing::TempDir dir;
  emit_report(empty, dir.path());
  CHECK(testing::read_lines(dir / "summary.csv").size() == 1);
  CHECK(testing::read_lines(dir / "allocations.csv").size() == 1);
}

TEST_CASE("run_point validation") {
  const auto cfg = short_config();
  const auto turbine = turbine_output_of(cfg, cfg.sweep.timesteps);
  CHECK_THROWS_AS(run_point(cfg, {1, 0}, turbine), Error);
  CHECK_THROWS_AS(run_point(cfg, {5}, turbine), Error);
}
