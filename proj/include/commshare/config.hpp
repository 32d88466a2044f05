#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commshare/allocation.hpp"
#include "commshare/cost.hpp"
#include "commshare/degradation.hpp"
#include "commshare/profiles.hpp"
#include "commshare/simulation.hpp"

namespace commshare {

struct WindSettings {
  double mean_speed_ms = 7.0;
  std::uint64_t seed = 7;
  std::optional<std::filesystem::path> power_curve_csv;
};

struct ClassTemplate {
  std::string name;
  Archetype archetype = Archetype::evening_peak;
  double annual_kwh = 3500.0;
};

enum class ProfileScaling {
  // Each class keeps its own annual energy whatever the composition.
  fixed,
  // One common factor keeps the community's energy at N times the
  // per-agent energy of the base composition.
  total_preserving,
};

enum class SweepMethod { exact, mc, sev, sampling };

struct SweepSettings {
  std::vector<ClassTemplate> classes;
  std::vector<double> composition;
  std::vector<std::size_t> sizes;
  std::vector<SweepMethod> methods{SweepMethod::exact, SweepMethod::mc, SweepMethod::sev, SweepMethod::sampling};
  std::size_t timesteps = kYearTimesteps;
  double timestep_hours = kHalfHour;
  std::uint64_t data_seed = 1;
  ProfileScaling profile_scaling = ProfileScaling::fixed;
  // Composition sweep: move `step` of the community from class pair[0] to
  // pair[1], `points` times, at a fixed community size.
  std::size_t composition_fixed_n = 200;
  std::size_t composition_pair[2] = {0, 1};
  double composition_step = 0.05;
  std::size_t composition_points = 13;
};

/// Everything a run needs: cost-model parameters, sampler settings and the
/// synthetic scenario definition.
struct ScenarioConfig {
  BatteryTemplate battery;
  std::optional<std::filesystem::path> cycle_life_csv;
  WindSettings wind;
  double import_pence_per_kwh = 16.0;
  double export_pence_per_kwh = 0.0;
  AssetConfig assets;
  SamplerParams sampler;
  SweepSettings sweep;

  static ScenarioConfig defaults();
};

// Small consumers (M-shaped averaged households) and large consumers
// (daytime occupancy), 9:1, N = 10..200 in steps of 10.
SweepSettings default_sweep();

/// Reads an INI file with sections [battery], [wind], [tariffs], [assets],
/// [sampler] and [sweep]. Missing keys keep their defaults; unknown sections
/// or keys raise InvalidConfig. Relative paths resolve against the file's
/// directory.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Synthetic community description for the `synth` command: one [community]
/// section with classes, archetypes, sizes, annual_kwh, noise, seed,
/// timesteps, timestep_hours.
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);
SyntheticSpec parse_synthetic_spec(const std::string& text);

std::string to_string(SweepMethod method);
SweepMethod parse_sweep_method(const std::string& name);

// Builders for the cost-model pieces described by a config.
CycleLifeTable cycle_life_of(const ScenarioConfig& cfg);
TariffSchedule tariffs_of(const ScenarioConfig& cfg);
GenerationSeries turbine_output_of(const ScenarioConfig& cfg, std::size_t timesteps);

}  // namespace commshare
