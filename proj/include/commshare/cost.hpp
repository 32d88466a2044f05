#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "commshare/degradation.hpp"
#include "commshare/simulation.hpp"
#include "commshare/timeseries.hpp"

namespace commshare {

enum class AssetSizing {
  // Subcoalition S owns battery and turbine share proportional to |S|.
  scale_with_coalition,
  // Every non-empty coalition owns the full community's assets.
  fixed_community,
};

struct AssetConfig {
  double wind_cost_per_kw = 1072.0;
  double wind_lifetime_years = 20.0;
  double battery_cost_per_kwh = 150.0;
  double battery_lifetime_years = 20.0;
  double battery_kwh_per_agent = 5.0;
  double wind_scale_per_agent = 0.006;
  double turbine_rated_kw = 330.0;
  AssetSizing sizing = AssetSizing::scale_with_coalition;
  // Community size N used by fixed_community sizing.
  std::size_t community_size = 0;

  void validate() const;
  double size_basis(std::size_t coalition_size) const;
};

/// Import/export prices in pence/kWh. A single entry is broadcast over all
/// timesteps.
struct TariffSchedule {
  std::vector<double> import_pence_per_kwh{16.0};
  std::vector<double> export_pence_per_kwh{0.0};

  static TariffSchedule flat(double import_pence, double export_pence);

  double import_at(std::size_t t) const;
  double export_at(std::size_t t) const;
  void validate(std::size_t timesteps) const;
};

/// Annual coalition cost in GBP, total = grid + wind + battery.
struct CoalitionCost {
  double grid = 0.0;
  double wind = 0.0;
  double battery = 0.0;
  double total = 0.0;
  double df = 0.0;
};

double grid_cost(const SimulationTrace& trace, const TariffSchedule& tariffs);
double wind_cost(std::size_t coalition_size, const AssetConfig& cfg);
double battery_cost(double capacity_kwh, double df, const AssetConfig& cfg);

/// The characteristic function c(S): dispatches the coalition's aggregate
/// demand against its share of generation and storage for one horizon and
/// prices grid exchange, turbine amortisation and degradation-aware battery
/// amortisation. Immutable and safe to call from many threads.
class CoalitionCostModel {
 public:
  CoalitionCostModel(GenerationSeries base_generation, BatteryTemplate battery, TariffSchedule tariffs,
                     AssetConfig assets, CycleLifeTable cycle_life = CycleLifeTable::default_lithium(),
                     double timestep_hours = kHalfHour);

  // base_generation is the output of one turbine; a coalition receives
  // wind_scale_per_agent * size_basis times that profile.
  CoalitionCost evaluate(std::span<const double> demand_kw, std::size_t coalition_size) const;

  CoalitionCost coalition_cost(const DemandMatrix& demands, std::span<const std::size_t> members) const;

  // Full dispatch trace for the coalition, for inspection and CSV dumps.
  SimulationTrace trace(std::span<const double> demand_kw, std::size_t coalition_size) const;

  std::size_t timesteps() const noexcept { return base_generation_.size(); }
  double timestep_hours() const noexcept { return timestep_hours_; }
  const AssetConfig& assets() const noexcept { return assets_; }
  const BatteryTemplate& battery() const noexcept { return battery_; }
  const TariffSchedule& tariffs() const noexcept { return tariffs_; }
  const GenerationSeries& base_generation() const noexcept { return base_generation_; }

 private:
  GenerationSeries base_generation_;
  BatteryTemplate battery_;
  TariffSchedule tariffs_;
  AssetConfig assets_;
  CycleLifeTable cycle_life_;
  double timestep_hours_;
};

}  // namespace commshare
