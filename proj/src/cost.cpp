#include "commshare/cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commshare/error.hpp"

namespace commshare {

void AssetConfig::validate() const {
  const double positives[] = {wind_cost_per_kw,     wind_lifetime_years,  battery_cost_per_kwh,
                              battery_lifetime_years, battery_kwh_per_agent, wind_scale_per_agent,
                              turbine_rated_kw};
  for (double v : positives) {
    if (!std::isfinite(v) || !(v > 0.0)) throw Error(ErrorKind::InvalidSpec, "asset parameters must be positive");
  }
  if (sizing == AssetSizing::fixed_community && community_size == 0)
    throw Error(ErrorKind::InvalidSpec, "fixed_community sizing needs community_size > 0");
}

double AssetConfig::size_basis(std::size_t coalition_size) const {
  return sizing == AssetSizing::scale_with_coalition ? static_cast<double>(coalition_size)
                                                     : static_cast<double>(community_size);
}

TariffSchedule TariffSchedule::flat(double import_pence, double export_pence) {
  return TariffSchedule{{import_pence}, {export_pence}};
}

double TariffSchedule::import_at(std::size_t t) const {
  return import_pence_per_kwh.size() == 1 ? import_pence_per_kwh.front() : import_pence_per_kwh[t];
}

double TariffSchedule::export_at(std::size_t t) const {
  return export_pence_per_kwh.size() == 1 ? export_pence_per_kwh.front() : export_pence_per_kwh[t];
}

void TariffSchedule::validate(std::size_t timesteps) const {
  for (const auto* prices : {&import_pence_per_kwh, &export_pence_per_kwh}) {
    if (prices->size() != 1 && prices->size() != timesteps)
      throw Error(ErrorKind::LengthMismatch, "tariff length " + std::to_string(prices->size()) +
                                                 " does not match " + std::to_string(timesteps) + " steps");
    for (double p : *prices) {
      if (!std::isfinite(p) || p < 0.0) throw Error(ErrorKind::InvalidSpec, "tariffs must be finite and >= 0");
    }
  }
}

double grid_cost(const SimulationTrace& trace, const TariffSchedule& tariffs) {
  tariffs.validate(trace.size());
  double bought = 0.0;
  double sold = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    bought += trace.e_b[t] * tariffs.import_at(t);
    sold += trace.e_s[t] * tariffs.export_at(t);
  }
  return (bought - sold) / 100.0;
}

double wind_cost(std::size_t coalition_size, const AssetConfig& cfg) {
  const double capacity_kw = cfg.wind_scale_per_agent * cfg.size_basis(coalition_size) * cfg.turbine_rated_kw;
  return capacity_kw * cfg.wind_cost_per_kw / cfg.wind_lifetime_years;
}

double battery_cost(double capacity_kwh, double df, const AssetConfig& cfg) {
  if (!(capacity_kwh >= 0.0) || !(df >= 0.0))
    throw Error(ErrorKind::InvalidSpec, "battery capacity and DF must be >= 0");
  const double divisor = df > 0.0 ? std::max(cfg.battery_lifetime_years, 1.0 / df) : cfg.battery_lifetime_years;
  return capacity_kwh * cfg.battery_cost_per_kwh / divisor;
}

CoalitionCostModel::CoalitionCostModel(GenerationSeries base_generation, BatteryTemplate battery,
                                       TariffSchedule tariffs, AssetConfig assets, CycleLifeTable cycle_life,
                                       double timestep_hours)
    : base_generation_(std::move(base_generation)),
      battery_(battery),
      tariffs_(std::move(tariffs)),
      assets_(assets),
      cycle_life_(std::move(cycle_life)),
      timestep_hours_(timestep_hours) {
  assets_.validate();
  tariffs_.validate(base_generation_.size());
  battery_.sized(1.0).validate();
  if (cycle_life_.empty()) throw Error(ErrorKind::EmptyTable, "cycle life table has no knots");
  if (!(timestep_hours_ > 0.0)) throw Error(ErrorKind::InvalidSpec, "timestep must be positive");
}

CoalitionCost CoalitionCostModel::evaluate(std::span<const double> demand, std::size_t coalition_size) const {
  if (demand.size() != timesteps())
    throw Error(ErrorKind::LengthMismatch, "demand has " + std::to_string(demand.size()) + " steps, expected " +
                                               std::to_string(timesteps()));
  CoalitionCost cost;
  if (coalition_size == 0) return cost;

  const double basis = assets_.size_basis(coalition_size);
  const double capacity = assets_.battery_kwh_per_agent * basis;
  const BatterySpec spec = battery_.sized(capacity);
  const double gen_scale = assets_.wind_scale_per_agent * basis;
  const double soc_ref = spec.soc_max_kwh();
  const auto base = base_generation_.values();

  BatteryController controller(spec, timestep_hours_);
  ReversalTracker reversals;
  if (soc_ref > 0.0) reversals.push(controller.soc_kwh() / soc_ref * 100.0);

  double bought = 0.0;
  double sold = 0.0;
  for (std::size_t t = 0; t < demand.size(); ++t) {
    const DispatchStep s = controller.step(demand[t], gen_scale * base[t]);
    bought += s.e_b * tariffs_.import_at(t);
    sold += s.e_s * tariffs_.export_at(t);
    if (soc_ref > 0.0) reversals.push(s.soc / soc_ref * 100.0);
  }

  cost.df = soc_ref > 0.0 ? depreciation_factor(rainflow_count_reversals(reversals.finish()), cycle_life_) : 0.0;
  cost.grid = (bought - sold) / 100.0;
  cost.wind = wind_cost(coalition_size, assets_);
  cost.battery = battery_cost(capacity, cost.df, assets_);
  cost.total = cost.grid + cost.wind + cost.battery;
  return cost;
}

CoalitionCost CoalitionCostModel::coalition_cost(const DemandMatrix& demands,
                                                 std::span<const std::size_t> members) const {
  std::vector<std::size_t> unique(members.begin(), members.end());
  std::sort(unique.begin(), unique.end());
  if (std::adjacent_find(unique.begin(), unique.end()) != unique.end())
    throw Error(ErrorKind::InvalidSpec, "coalition lists an agent twice");
  return evaluate(aggregate_demand(demands, unique), unique.size());
}

SimulationTrace CoalitionCostModel::trace(std::span<const double> demand, std::size_t coalition_size) const {
  const double basis = assets_.size_basis(coalition_size);
  const BatterySpec spec = battery_.sized(assets_.battery_kwh_per_agent * basis);
  std::vector<double> generation(timesteps());
  const double gen_scale = assets_.wind_scale_per_agent * basis;
  for (std::size_t t = 0; t < generation.size(); ++t) generation[t] = gen_scale * base_generation_[t];
  return simulate(demand, generation, spec, timestep_hours_);
}

}  // namespace commshare
