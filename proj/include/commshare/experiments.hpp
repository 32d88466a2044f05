#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commshare/allocation.hpp"
#include "commshare/config.hpp"

namespace commshare {

/// Integer class sizes summing to n from ratios, by largest remainder (ties
/// go to the lower class index).
std::vector<std::size_t> largest_remainder_sizes(std::size_t n, const std::vector<double>& ratios);

struct MethodOutcome {
  Method method = Method::exact_kclass;
  // Per configured class; classes absent from the point hold no value.
  std::vector<std::optional<double>> costs;
  std::vector<std::optional<double>> rd_percent;
  double average_rd_percent = 0.0;
  double efficiency_residual = 0.0;
  std::size_t evaluations = 0;
  double wall_seconds = 0.0;
};

struct ScenarioPoint {
  std::size_t n = 0;
  // Configured class order; zero-size classes take no part in the point.
  std::vector<std::size_t> class_sizes;
  std::vector<double> composition;
  double community_total = 0.0;
  std::size_t table_evaluations = 0;
  double table_seconds = 0.0;
  std::vector<MethodOutcome> methods;
};

struct ExperimentReport {
  enum class Kind { size, composition } kind = Kind::size;
  std::vector<std::string> class_names;
  // Composition sweeps: the class whose share is plotted on the x axis.
  std::size_t varied_class = 0;
  std::vector<ScenarioPoint> points;
};

/// One community: class profiles for the given sizes, the shared cost table,
/// exact K-class Shapley values, then the configured approximations with
/// relative differences against the exact values.
ScenarioPoint run_point(const ScenarioConfig& cfg, const std::vector<std::size_t>& class_sizes,
                        const GenerationSeries& turbine);

// Class demand profiles (configured order) for one point.
std::vector<std::vector<double>> class_profiles(const ScenarioConfig& cfg, const std::vector<std::size_t>& class_sizes);

ExperimentReport run_size_sweep(const ScenarioConfig& cfg);

/// Fixed community size; point p moves p * step of the community from
/// class pair[0] to class pair[1].
ExperimentReport run_composition_sweep(const ScenarioConfig& cfg);

/// Writes allocations.csv, relative_differences.csv, summary.csv and
/// timings.csv plus an SVG convergence plot. Everything except timings.csv
/// is byte-identical across runs with the same configuration.
void emit_report(const ExperimentReport& report, const std::filesystem::path& outdir);

}  // namespace commshare
