#include "commshare/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "commshare/csv.hpp"
#include "commshare/error.hpp"

namespace commshare {

namespace {

void require_finite_nonnegative(std::span<const double> values, const std::string& what) {
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!std::isfinite(values[t]))
      throw Error(ErrorKind::InvalidSpec, what + " has a non-finite value at t=" + std::to_string(t));
    if (values[t] < 0.0)
      throw Error(ErrorKind::NegativeDemand, what + " is negative at t=" + std::to_string(t));
  }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

DemandMatrix::DemandMatrix(std::vector<std::string> agent_ids,
                           std::vector<std::vector<double>> rows, double timestep_hours)
    : agent_ids_(std::move(agent_ids)), timestep_hours_(timestep_hours) {
  if (agent_ids_.empty()) throw Error(ErrorKind::InvalidSpec, "demand matrix needs at least one agent");
  if (rows.size() != agent_ids_.size())
    throw Error(ErrorKind::LengthMismatch, "agent id count differs from row count");
  if (!(timestep_hours > 0.0)) throw Error(ErrorKind::InvalidSpec, "timestep must be positive");
  timesteps_ = rows.front().size();
  values_.reserve(timesteps_ * rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != timesteps_)
      throw Error(ErrorKind::LengthMismatch, "agent " + agent_ids_[i] + " has " +
                                                 std::to_string(rows[i].size()) + " entries, expected " +
                                                 std::to_string(timesteps_));
    require_finite_nonnegative(rows[i], "demand of agent " + agent_ids_[i]);
    values_.insert(values_.end(), rows[i].begin(), rows[i].end());
  }
}

std::span<const double> DemandMatrix::row(std::size_t agent) const {
  if (agent >= agents()) throw Error(ErrorKind::IndexOutOfRange, "agent index " + std::to_string(agent));
  return {values_.data() + agent * timesteps_, timesteps_};
}

GenerationSeries::GenerationSeries(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t]) || values_[t] < 0.0)
      throw Error(ErrorKind::InvalidSpec, "generation must be finite and >= 0 at t=" + std::to_string(t));
  }
}

PowerCurve::PowerCurve(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw Error(ErrorKind::EmptyCurve, "power curve has no knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second) || knots_[i].second < 0.0)
      throw Error(ErrorKind::InvalidSpec, "power curve knot " + std::to_string(i) + " is invalid");
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first))
      throw Error(ErrorKind::InvalidSpec, "power curve speeds must be strictly increasing");
  }
}

double PowerCurve::power_at(double speed) const {
  if (knots_.empty()) throw Error(ErrorKind::EmptyCurve, "power curve has no knots");
  if (!(speed >= knots_.front().first) || speed > knots_.back().first) return 0.0;
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), speed,
                                      [](double s, const auto& knot) { return s < knot.first; });
  if (upper == knots_.end()) return knots_.back().second;
  const auto& [v1, p1] = *upper;
  const auto& [v0, p0] = *(upper - 1);
  return p0 + (p1 - p0) * (speed - v0) / (v1 - v0);
}

PowerCurve default_turbine_curve() {
  return PowerCurve({{3.0, 5.0},
                     {4.0, 13.7},
                     {5.0, 30.0},
                     {6.0, 55.0},
                     {7.0, 92.0},
                     {8.0, 138.0},
                     {9.0, 196.0},
                     {10.0, 250.0},
                     {11.0, 292.8},
                     {12.0, 320.0},
                     {13.0, 330.0},
                     {25.0, 330.0}});
}

std::vector<double> RawDemand::coverage() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.empty()) {
      out.push_back(0.0);
      continue;
    }
    const auto present = std::count_if(row.begin(), row.end(), [](double v) { return !std::isnan(v); });
    out.push_back(static_cast<double>(present) / static_cast<double>(row.size()));
  }
  return out;
}

RawDemand load_raw_demand_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw Error(ErrorKind::MalformedRow, "row 0: missing header in " + path.string());
  RawDemand raw;
  raw.agent_ids = csv::split(lines.front());
  const std::size_t n = raw.agent_ids.size();
  raw.rows.assign(n, {});

  std::size_t t = 0;
  for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
    const auto& line = lines[line_no];
    if (line.empty() && line_no + 1 == lines.size()) break;
    const auto fields = csv::split(line);
    if (fields.size() != n)
      throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no) + ": expected " +
                                               std::to_string(n) + " fields, got " +
                                               std::to_string(fields.size()));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& field = fields[i];
      if (field.find_first_not_of(" \t") == std::string::npos) {
        raw.rows[i].push_back(kMissing);
        continue;
      }
      const auto value = csv::parse_double(field);
      if (!value || !std::isfinite(*value))
        throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no) + ": bad value '" + field + "'");
      if (*value < 0.0)
        throw Error(ErrorKind::NegativeDemand,
                    "agent " + raw.agent_ids[i] + " at t=" + std::to_string(t));
      raw.rows[i].push_back(*value);
    }
    ++t;
  }
  return raw;
}

DemandMatrix load_demand_csv(const std::filesystem::path& path, std::size_t expected_timesteps,
                             double timestep_hours) {
  RawDemand raw = load_raw_demand_csv(path);
  const std::size_t rows = raw.rows.empty() ? 0 : raw.rows.front().size();
  if (rows != expected_timesteps)
    throw Error(ErrorKind::LengthMismatch, path.string() + " has " + std::to_string(rows) +
                                               " data rows, expected " + std::to_string(expected_timesteps));
  std::vector<std::vector<double>> filled;
  filled.reserve(raw.rows.size());
  for (const auto& row : raw.rows) filled.push_back(interpolate_missing(row));
  return DemandMatrix(std::move(raw.agent_ids), std::move(filled), timestep_hours);
}

void write_demand_csv(const std::filesystem::path& path, const DemandMatrix& demands) {
  auto out = open_for_write(path);
  for (std::size_t i = 0; i < demands.agents(); ++i) out << (i ? "," : "") << demands.agent_ids()[i];
  out << '\n';
  for (std::size_t t = 0; t < demands.timesteps(); ++t) {
    for (std::size_t i = 0; i < demands.agents(); ++i)
      out << (i ? "," : "") << csv::format_double(demands.row(i)[t]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

GenerationSeries load_generation_csv(const std::filesystem::path& path, std::size_t expected_timesteps) {
  const auto lines = csv::read_lines(path);
  if (lines.empty() || csv::split(lines.front()).size() != 1)
    throw Error(ErrorKind::MalformedRow, "row 0: expected single column header generation_kw");
  std::vector<double> values;
  for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
    if (lines[line_no].empty() && line_no + 1 == lines.size()) break;
    const auto value = csv::parse_double(lines[line_no]);
    if (!value) throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no));
    values.push_back(*value);
  }
  if (values.size() != expected_timesteps)
    throw Error(ErrorKind::LengthMismatch, path.string() + " has " + std::to_string(values.size()) +
                                               " rows, expected " + std::to_string(expected_timesteps));
  return GenerationSeries(std::move(values));
}

void write_generation_csv(const std::filesystem::path& path, const GenerationSeries& generation) {
  auto out = open_for_write(path);
  out << "generation_kw\n";
  for (double g : generation.values()) out << csv::format_double(g) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

PowerCurve load_power_curve_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  std::vector<std::pair<double, double>> knots;
  for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
    if (lines[line_no].empty()) continue;
    const auto fields = csv::split(lines[line_no]);
    if (fields.size() != 2) throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no));
    const auto speed = csv::parse_double(fields[0]);
    const auto power = csv::parse_double(fields[1]);
    if (!speed || !power) throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no));
    knots.emplace_back(*speed, *power);
  }
  return PowerCurve(std::move(knots));
}

std::vector<double> interpolate_missing(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  if (std::isnan(out.front()) || std::isnan(out.back()))
    throw Error(ErrorKind::BoundaryGap, "series starts or ends with a gap");
  std::size_t left = 0;
  for (std::size_t t = 1; t < out.size(); ++t) {
    if (std::isnan(out[t])) continue;
    if (t > left + 1) {
      const double span = static_cast<double>(t - left);
      for (std::size_t g = left + 1; g < t; ++g) {
        const double w = static_cast<double>(g - left) / span;
        out[g] = out[left] + w * (out[t] - out[left]);
      }
    }
    left = t;
  }
  return out;
}

std::vector<double> aggregate_demand(const DemandMatrix& demands, std::span<const std::size_t> members) {
  std::vector<double> total(demands.timesteps(), 0.0);
  for (std::size_t member : members) {
    const auto row = demands.row(member);
    for (std::size_t t = 0; t < total.size(); ++t) total[t] += row[t];
  }
  return total;
}

GenerationSeries wind_power_from_speed(std::span<const double> speeds, const PowerCurve& curve, double scale) {
  if (curve.empty()) throw Error(ErrorKind::EmptyCurve, "power curve has no knots");
  if (!(scale >= 0.0)) throw Error(ErrorKind::InvalidSpec, "scale must be >= 0");
  std::vector<double> out(speeds.size());
  for (std::size_t t = 0; t < speeds.size(); ++t) out[t] = scale * curve.power_at(speeds[t]);
  return GenerationSeries(std::move(out));
}

}  // namespace commshare
