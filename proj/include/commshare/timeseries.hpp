#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace commshare {

inline constexpr std::size_t kYearTimesteps = 365 * 48;
inline constexpr double kHalfHour = 0.5;

// Marks a missing reading in raw series. CSV files use an empty cell.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Per-agent power demand in kW, N agents by T timesteps, stored row-major.
/// Every value is finite and non-negative.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  DemandMatrix(std::vector<std::string> agent_ids, std::vector<std::vector<double>> rows,
               double timestep_hours = kHalfHour);

  std::size_t agents() const noexcept { return agent_ids_.size(); }
  std::size_t timesteps() const noexcept { return timesteps_; }
  double timestep_hours() const noexcept { return timestep_hours_; }
  const std::vector<std::string>& agent_ids() const noexcept { return agent_ids_; }

  std::span<const double> row(std::size_t agent) const;

 private:
  std::vector<std::string> agent_ids_;
  std::vector<double> values_;
  std::size_t timesteps_ = 0;
  double timestep_hours_ = kHalfHour;
};

/// Generation g(t) in kW. Non-negative and finite.
class GenerationSeries {
 public:
  GenerationSeries() = default;
  explicit GenerationSeries(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }

 private:
  std::vector<double> values_;
};

/// Turbine power curve: (wind speed m/s, power kW) knots with strictly
/// increasing speeds. Output outside [first, last] knot speed is zero.
class PowerCurve {
 public:
  PowerCurve() = default;
  explicit PowerCurve(std::vector<std::pair<double, double>> knots);

  double power_at(double speed_ms) const;
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
  bool empty() const noexcept { return knots_.empty(); }

 private:
  std::vector<std::pair<double, double>> knots_;
};

// Approximate 330 kW class curve (3 m/s cut-in, 25 m/s cut-out) used by the
// synthetic scenarios. Supply a manufacturer curve via CSV for real studies.
PowerCurve default_turbine_curve();

/// Raw per-agent series as read from disk; gaps hold kMissing.
struct RawDemand {
  std::vector<std::string> agent_ids;
  std::vector<std::vector<double>> rows;

  // Fraction of non-missing entries in each row.
  std::vector<double> coverage() const;
};

RawDemand load_raw_demand_csv(const std::filesystem::path& path);

/// Loads a demand CSV, fills gaps by linear interpolation and validates the
/// length against expected_timesteps.
DemandMatrix load_demand_csv(const std::filesystem::path& path,
                             std::size_t expected_timesteps = kYearTimesteps,
                             double timestep_hours = kHalfHour);

// Values are written with round-trip precision so a reload is bit-exact.
void write_demand_csv(const std::filesystem::path& path, const DemandMatrix& demands);

GenerationSeries load_generation_csv(const std::filesystem::path& path,
                                     std::size_t expected_timesteps = kYearTimesteps);
void write_generation_csv(const std::filesystem::path& path, const GenerationSeries& generation);

PowerCurve load_power_curve_csv(const std::filesystem::path& path);

std::vector<double> interpolate_missing(std::span<const double> values);

/// d_S(t): elementwise sum of the member rows. Empty membership gives zeros.
std::vector<double> aggregate_demand(const DemandMatrix& demands,
                                     std::span<const std::size_t> members);

GenerationSeries wind_power_from_speed(std::span<const double> speeds_ms, const PowerCurve& curve,
                                       double scale);

}  // namespace commshare
