#include <cmath>
#include <vector>

#include "commshare/error.hpp"
#include "commshare/timeseries.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace commshare;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("demand csv parses agents and rows") {
  testing::TempDir dir;
  testing::write_file(dir / "d.csv", "a,b\n1.0,2.0\n1.0,2.0\n1.0,2.0\n1.0,2.0\n");
  const DemandMatrix m = load_demand_csv(dir / "d.csv", 4);
  CHECK(m.agents() == 2);
  CHECK(m.timesteps() == 4);
  CHECK(m.agent_ids() == std::vector<std::string>{"a", "b"});
  CHECK(m.row(1)[3] == 2.0);
  CHECK(m.timestep_hours() == 0.5);
}

TEST_CASE("demand csv accepts CRLF and fills interior gaps") {
  testing::TempDir dir;
  testing::write_file(dir / "d.csv", "a\r\n2.0\r\n\r\n4.0\r\n");
  const DemandMatrix m = load_demand_csv(dir / "d.csv", 3);
  CHECK(m.row(0)[1] == doctest::Approx(3.0));
}

TEST_CASE("demand csv validation") {
  testing::TempDir dir;
  testing::write_file(dir / "neg.csv", "a,b\n1.0,-0.5\n");
  CHECK(kind_of([&] { load_demand_csv(dir / "neg.csv", 1); }) == ErrorKind::NegativeDemand);

  testing::write_file(dir / "short.csv", "a\n1\n1\n");
  CHECK(kind_of([&] { load_demand_csv(dir / "short.csv", 3); }) == ErrorKind::LengthMismatch);

  testing::write_file(dir / "ragged.csv", "a,b\n1,2\n1\n");
  CHECK(kind_of([&] { load_demand_csv(dir / "ragged.csv", 2); }) == ErrorKind::MalformedRow);

  testing::write_file(dir / "text.csv", "a\nabc\n");
  CHECK(kind_of([&] { load_demand_csv(dir / "text.csv", 1); }) == ErrorKind::MalformedRow);

  CHECK(kind_of([&] { load_demand_csv(dir / "absent.csv", 1); }) == ErrorKind::MissingFile);
}

TEST_CASE("a year-long demand file with one row missing is rejected") {
  testing::TempDir dir;
  std::string text = "a\n";
  for (std::size_t t = 0; t + 1 < kYearTimesteps; ++t) text += "0.5\n";
  testing::write_file(dir / "d.csv", text);
  CHECK(kind_of([&] { load_demand_csv(dir / "d.csv"); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("write then load is bit-exact") {
  testing::TempDir dir;
  std::vector<std::vector<double>> rows{{0.1, 1.0 / 3.0, 2.5e-17, 123456.789012345678},
                                        {std::nextafter(1.0, 2.0), 0.0, 7.0, 1e300}};
  const DemandMatrix m({"x", "y"}, rows);
  write_demand_csv(dir / "m.csv", m);
  const DemandMatrix back = load_demand_csv(dir / "m.csv", 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t t = 0; t < 4; ++t) CHECK(back.row(i)[t] == rows[i][t]);

  const GenerationSeries g({0.0, 1.0 / 7.0, 330.0});
  write_generation_csv(dir / "g.csv", g);
  const GenerationSeries gb = load_generation_csv(dir / "g.csv", 3);
  for (std::size_t t = 0; t < 3; ++t) CHECK(gb[t] == g[t]);
}

TEST_CASE("interpolate_missing") {
  CHECK(interpolate_missing(std::vector<double>{2.0, kMissing, 4.0}) == std::vector<double>{2.0, 3.0, 4.0});
  CHECK(interpolate_missing(std::vector<double>{1.0, kMissing, kMissing, 4.0}) ==
        std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(kind_of([] { interpolate_missing(std::vector<double>{kMissing, 1.0}); }) == ErrorKind::BoundaryGap);
  CHECK(kind_of([] { interpolate_missing(std::vector<double>{1.0, kMissing}); }) == ErrorKind::BoundaryGap);
}

TEST_CASE("aggregate_demand") {
  const DemandMatrix m({"a", "b", "c"}, {{1, 2}, {3, 4}, {0.25, 0.5}});
  CHECK(aggregate_demand(m, std::vector<std::size_t>{}) == std::vector<double>{0, 0});
  CHECK(aggregate_demand(m, std::vector<std::size_t>{0, 1}) == std::vector<double>{4, 6});
  CHECK(aggregate_demand(m, std::vector<std::size_t>{0}) == std::vector<double>{1, 2});
  CHECK(kind_of([&] { aggregate_demand(m, std::vector<std::size_t>{3}); }) == ErrorKind::IndexOutOfRange);

  // Disjoint unions add elementwise.
  const auto a = aggregate_demand(m, std::vector<std::size_t>{0, 2});
  const auto b = aggregate_demand(m, std::vector<std::size_t>{1});
  const auto ab = aggregate_demand(m, std::vector<std::size_t>{0, 1, 2});
  for (std::size_t t = 0; t < 2; ++t) CHECK(ab[t] == doctest::Approx(a[t] + b[t]).epsilon(1e-12));
}

TEST_CASE("wind power from speed") {
  const PowerCurve curve({{3.0, 0.0}, {5.0, 0.0}, {7.0, 40.0}, {10.0, 100.0}, {13.0, 330.0}, {25.0, 330.0}});
  const std::vector<double> speeds{10.0, 6.0, 13.0, 2.0, 26.0, 0.0};
  const auto g = wind_power_from_speed(speeds, curve, 1.0);
  CHECK(g[0] == 100.0);
  CHECK(g[1] == doctest::Approx(20.0));
  CHECK(g[3] == 0.0);
  CHECK(g[4] == 0.0);
  CHECK(wind_power_from_speed(speeds, curve, 0.006 * 200)[2] == doctest::Approx(396.0));

  const auto zero = wind_power_from_speed(std::vector<double>(5, 0.0), curve, 2.0);
  for (double v : zero.values()) CHECK(v == 0.0);

  const auto more = wind_power_from_speed(speeds, curve, 1.5);
  for (std::size_t t = 0; t < speeds.size(); ++t) CHECK(more[t] >= g[t]);

  CHECK(kind_of([&] { wind_power_from_speed(speeds, PowerCurve{}, 1.0); }) == ErrorKind::EmptyCurve);
  CHECK(kind_of([] { PowerCurve(std::vector<std::pair<double, double>>{}); }) == ErrorKind::EmptyCurve);
  CHECK(kind_of([] { PowerCurve({{5.0, 1.0}, {5.0, 2.0}}); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("power curve csv") {
  testing::TempDir dir;
  testing::write_file(dir / "pc.csv", "wind_speed_ms,power_kw\n3,0\n5,10\n");
  const PowerCurve pc = load_power_curve_csv(dir / "pc.csv");
  CHECK(pc.power_at(4.0) == doctest::Approx(5.0));
}
