#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace commshare {

/// Physical battery parameters. SoC bounds are fractions of capacity;
/// efficiencies lie in (0, 1].
struct BatterySpec {
  double capacity_kwh = 0.0;
  double soc_min_frac = 0.1;
  double soc_max_frac = 1.0;
  double p_max_kw = 0.0;
  double eta_c = 0.95;
  double eta_d = 0.95;
  // Defaults to soc_min_frac when unset.
  std::optional<double> soc_init_frac;

  double soc_min_kwh() const noexcept { return soc_min_frac * capacity_kwh; }
  double soc_max_kwh() const noexcept { return soc_max_frac * capacity_kwh; }
  double soc_init_kwh() const noexcept { return soc_init_frac.value_or(soc_min_frac) * capacity_kwh; }

  // Throws InvalidSpec on any violated bound.
  void validate() const;
};

/// Per-coalition battery sizing rule: everything but capacity is shared, and
/// the power limit keeps a fixed C-rate so dispatch physics match across sizes.
struct BatteryTemplate {
  double soc_min_frac = 0.1;
  double soc_max_frac = 1.0;
  double eta_c = 0.95;
  double eta_d = 0.95;
  double c_rate_per_hour = 0.5;
  std::optional<double> soc_init_frac;

  BatterySpec sized(double capacity_kwh) const;
};

struct SimulationTrace {
  std::vector<double> p_bat;   // kW, negative while charging
  std::vector<double> soc;     // kWh after step t
  std::vector<double> p_grid;  // kW, positive import
  std::vector<double> e_b;     // kWh imported during step t
  std::vector<double> e_s;     // kWh exported during step t

  std::size_t size() const noexcept { return p_bat.size(); }
};

struct DispatchStep {
  double p_bat = 0.0;
  double soc = 0.0;
  double p_grid = 0.0;
  double e_b = 0.0;
  double e_s = 0.0;
};

/// Rule-based controller: surplus charges the battery (limited by power and
/// headroom) and the rest is exported; deficits discharge the battery
/// (limited by power and stored energy) and the rest is imported.
class BatteryController {
 public:
  BatteryController(const BatterySpec& spec, double timestep_hours);

  DispatchStep step(double demand_kw, double generation_kw);
  double soc_kwh() const noexcept { return soc_; }

 private:
  double soc_min_;
  double soc_max_;
  double p_max_;
  double eta_c_;
  double eta_d_;
  double dt_;
  double soc_;
};

SimulationTrace simulate(std::span<const double> demand_kw, std::span<const double> generation_kw,
                         const BatterySpec& battery, double timestep_hours);

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace);

}  // namespace commshare
