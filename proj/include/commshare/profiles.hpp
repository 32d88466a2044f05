#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commshare/allocation.hpp"
#include "commshare/timeseries.hpp"

namespace commshare {

inline constexpr std::size_t kStepsPerDay = 48;

std::vector<double> l2_normalize(std::span<const double> series);

/// Days that survived the winter-weekday filter, one 48-value row per day.
struct DailyProfiles {
  std::vector<std::chrono::year_month_day> days;
  std::vector<std::vector<double>> rows;

  std::size_t size() const noexcept { return rows.size(); }
};

// Winter months (Jan, Feb, Nov, Dec) without the holiday period
// (Jan 1-6, Dec 22-31), Monday to Thursday only.
bool is_retained_winter_weekday(std::chrono::year_month_day date);

/// Splits a half-hourly series starting at 00:00 on `start` into days and
/// keeps the retained winter weekdays. Throws CalendarMismatch unless the
/// series is a whole number of days.
DailyProfiles filter_winter_weekdays(std::span<const double> series, std::chrono::year_month_day start);

// Mean over days of each half-hour slot.
std::vector<double> daily_mean_profile(const DailyProfiles& profiles);

// Agents whose fraction of present readings is below min_coverage are dropped.
RawDemand filter_by_coverage(const RawDemand& raw, double min_coverage = 0.95);

struct ClusterModel {
  std::size_t k = 0;
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  // Inertia after every assignment step; non-increasing.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
};

/// Lloyd's k-means from a seeded k-means++ start. Stops once no centroid
/// moves more than tol (Euclidean) or after max_iters updates.
ClusterModel kmeans(const std::vector<std::vector<double>>& rows, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters = 300, double tol = 1e-10);

/// Scales every class shape by one common factor so that
/// sum_k N_k sum_t d_k(t) * timestep_hours equals reference_total.
std::vector<std::vector<double>> synthesize_class_profiles(const std::vector<std::vector<double>>& shapes,
                                                           std::span<const std::size_t> class_sizes,
                                                           double reference_total, double timestep_hours = 1.0);

// Behavioural archetypes for synthetic households.
enum class Archetype { evening_peak, stay_at_home, m_shape, night_owl };

std::string_view to_string(Archetype archetype);
Archetype parse_archetype(std::string_view name);

// Daily 48-slot shape of an archetype with unit mean.
std::vector<double> archetype_daily_shape(Archetype archetype);

/// Profile in kW: the daily shape tiled with a winter-high seasonal swing,
/// scaled to annual_kwh per 8760 h (pro-rated for shorter horizons).
std::vector<double> archetype_profile(Archetype archetype, double annual_kwh, std::size_t timesteps = kYearTimesteps,
                                      double timestep_hours = kHalfHour);

struct SyntheticClassSpec {
  std::string name;
  Archetype archetype = Archetype::evening_peak;
  std::size_t size = 1;
  double annual_kwh = 3500.0;
};

struct SyntheticSpec {
  std::vector<SyntheticClassSpec> classes;
  std::size_t timesteps = kYearTimesteps;
  double timestep_hours = kHalfHour;
  // Standard deviation of the per-step multiplicative noise on each agent.
  double noise = 0.1;
  std::uint64_t seed = 1;
};

struct SyntheticCommunity {
  DemandMatrix demands;
  // Noise-free class templates; classes sorted by size.
  ClassStructure classes;
  // Index into SyntheticSpec::classes for every agent row.
  std::vector<std::size_t> agent_class;
};

SyntheticCommunity generate_synthetic_community(const SyntheticSpec& spec);

/// Hub-height wind speeds in m/s: an AR(1) Gaussian process mapped to a
/// Weibull(k = 2) marginal with the given mean.
std::vector<double> synthetic_wind_speeds(std::size_t timesteps, std::uint64_t seed, double mean_speed_ms = 7.0,
                                          double lag_correlation = 0.97);

// Output of one turbine for the synthetic wind year.
GenerationSeries synthetic_turbine_output(std::size_t timesteps, std::uint64_t seed, double mean_speed_ms = 7.0,
                                          const PowerCurve& curve = default_turbine_curve());

}  // namespace commshare
