#include "commshare/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "commshare/error.hpp"
#include "commshare/profiles.hpp"

namespace commshare {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool wants(const ScenarioConfig& cfg, SweepMethod m) {
  const auto& ms = cfg.sweep.methods;
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

}  // namespace

std::vector<std::size_t> largest_remainder_sizes(std::size_t n, const std::vector<double>& ratios) {
  if (ratios.empty()) throw Error(ErrorKind::InfeasibleComposition, "no classes");
  double total = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw Error(ErrorKind::InfeasibleComposition, "ratios must be >= 0");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::InfeasibleComposition, "ratios must sum to 1");

  std::vector<std::size_t> sizes(ratios.size());
  std::vector<double> remainder(ratios.size());
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    // Round the product first so ratios like 0.3 * 10 land on 3, not 2.999...
    const double exact = std::round(static_cast<double>(n) * ratios[k] * 1e9) / 1e9;
    sizes[k] = static_cast<std::size_t>(std::floor(exact));
    remainder[k] = exact - static_cast<double>(sizes[k]);
    assigned += sizes[k];
  }
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++sizes[order[i % order.size()]];
  return sizes;
}

std::vector<std::vector<double>> class_profiles(const ScenarioConfig& cfg, const std::vector<std::size_t>& class_sizes) {
  const auto& sw = cfg.sweep;
  std::vector<std::vector<double>> profiles;
  for (const auto& cls : sw.classes)
    profiles.push_back(archetype_profile(cls.archetype, cls.annual_kwh, sw.timesteps, sw.timestep_hours));
  if (sw.profile_scaling == ProfileScaling::fixed) return profiles;

  // Keep the community's energy at n agents of the base composition.
  std::vector<std::vector<double>> active;
  std::vector<std::size_t> active_sizes;
  std::size_t n = 0;
  double per_agent = 0.0;
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    per_agent += sw.composition[k] * sw.classes[k].annual_kwh;
    n += class_sizes[k];
    if (class_sizes[k] == 0) continue;
    active.push_back(profiles[k]);
    active_sizes.push_back(class_sizes[k]);
  }
  const double horizon = static_cast<double>(sw.timesteps) * sw.timestep_hours / 8760.0;
  const double reference = static_cast<double>(n) * per_agent * horizon;
  const auto scaled = synthesize_class_profiles(active, active_sizes, reference, sw.timestep_hours);
  for (std::size_t k = 0, a = 0; k < profiles.size(); ++k) {
    if (class_sizes[k] > 0) profiles[k] = scaled[a++];
  }
  return profiles;
}

ScenarioPoint run_point(const ScenarioConfig& cfg, const std::vector<std::size_t>& class_sizes,
                        const GenerationSeries& turbine) {
  const auto& sw = cfg.sweep;
  if (class_sizes.size() != sw.classes.size())
    throw Error(ErrorKind::InfeasibleComposition, "one size per configured class is required");
  const std::size_t n = std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  if (n < 2) throw Error(ErrorKind::InfeasibleComposition, "a scenario point needs at least two agents");

  ScenarioPoint point;
  point.n = n;
  point.class_sizes = class_sizes;
  for (std::size_t s : class_sizes) point.composition.push_back(static_cast<double>(s) / static_cast<double>(n));

  const auto profiles = class_profiles(cfg, class_sizes);
  std::vector<std::size_t> active;
  std::vector<std::size_t> sizes;
  std::vector<std::vector<double>> demands;
  for (std::size_t k = 0; k < class_sizes.size(); ++k) {
    if (class_sizes[k] == 0) continue;
    active.push_back(k);
    sizes.push_back(class_sizes[k]);
    demands.push_back(profiles[k]);
  }
  const ClassStructure classes(sizes, demands);

  AssetConfig assets = cfg.assets;
  assets.community_size = n;
  const CoalitionCostModel model(turbine, cfg.battery, tariffs_of(cfg), assets, cycle_life_of(cfg),
                                 sw.timestep_hours);

  auto start = Clock::now();
  const CoalitionCostTable table = build_cost_table(classes, class_game(model, classes));
  point.table_seconds = seconds_since(start);
  point.table_evaluations = table.eval_count;
  point.community_total = table.grand_coalition();

  // Results come back in the structure's sorted order; map them to the
  // configured class order.
  const auto record = [&](const AllocationResult& r, double seconds) {
    MethodOutcome out;
    out.method = r.method;
    out.costs.assign(class_sizes.size(), std::nullopt);
    for (std::size_t i = 0; i < r.costs.size(); ++i) out.costs[active[classes.original_index(i)]] = r.costs[i];
    out.efficiency_residual = r.efficiency_residual();
    out.evaluations = r.evaluations;
    out.wall_seconds = seconds;
    point.methods.push_back(std::move(out));
  };

  start = Clock::now();
  AllocationResult exact = exact_shapley_kclass(table, classes);
  exact.evaluations = table.eval_count;
  record(exact, seconds_since(start));

  if (wants(cfg, SweepMethod::mc)) {
    start = Clock::now();
    const auto r = marginal_contribution_alloc(table, classes);
    record(r, seconds_since(start));
  }
  if (wants(cfg, SweepMethod::sev)) {
    start = Clock::now();
    const auto r = sev_alloc(classes, profile_game(model), point.community_total);
    record(r, seconds_since(start));
  }
  if (wants(cfg, SweepMethod::sampling)) {
    start = Clock::now();
    const auto r = adaptive_sampling_alloc(table, classes, cfg.sampler);
    record(r, seconds_since(start));
  }

  const auto& truth = point.methods.front().costs;
  for (auto& m : point.methods) {
    m.rd_percent.assign(class_sizes.size(), std::nullopt);
    std::vector<double> rds;
    std::vector<std::size_t> rd_sizes;
    for (std::size_t k = 0; k < class_sizes.size(); ++k) {
      if (!m.costs[k]) continue;
      m.rd_percent[k] = relative_difference(*m.costs[k], *truth[k]);
      rds.push_back(*m.rd_percent[k]);
      rd_sizes.push_back(class_sizes[k]);
    }
    m.average_rd_percent = average_relative_difference(rds, rd_sizes);
  }
  if (!wants(cfg, SweepMethod::exact) && !point.methods.empty()) {
    // The exact values are always computed as the reference; drop the row
    // only when the configuration leaves it out.
    point.methods.erase(point.methods.begin());
  }
  return point;
}

ExperimentReport run_size_sweep(const ScenarioConfig& cfg) {
  ExperimentReport report;
  report.kind = ExperimentReport::Kind::size;
  for (const auto& c : cfg.sweep.classes) report.class_names.push_back(c.name);
  const GenerationSeries turbine = turbine_output_of(cfg, cfg.sweep.timesteps);
  for (std::size_t n : cfg.sweep.sizes)
    report.points.push_back(run_point(cfg, largest_remainder_sizes(n, cfg.sweep.composition), turbine));
  return report;
}

ExperimentReport run_composition_sweep(const ScenarioConfig& cfg) {
  const auto& sw = cfg.sweep;
  ExperimentReport report;
  report.kind = ExperimentReport::Kind::composition;
  for (const auto& c : sw.classes) report.class_names.push_back(c.name);
  if (!(sw.composition_step >= 0.0)) throw Error(ErrorKind::InfeasibleComposition, "step must be >= 0");

  const GenerationSeries turbine = turbine_output_of(cfg, sw.timesteps);
  const std::size_t from = sw.composition_pair[0];
  const std::size_t to = sw.composition_pair[1];
  report.varied_class = from;
  for (std::size_t p = 0; p < sw.composition_points; ++p) {
    std::vector<double> ratios = sw.composition;
    const double shift = static_cast<double>(p) * sw.composition_step;
    ratios[from] -= shift;
    ratios[to] += shift;
    if (ratios[from] < -1e-9 || ratios[to] > 1.0 + 1e-9)
      throw Error(ErrorKind::InfeasibleComposition,
                  "composition point " + std::to_string(p) + " leaves the simplex");
    ratios[from] = std::max(0.0, ratios[from]);
    ratios[to] = std::min(1.0, ratios[to]);
    report.points.push_back(run_point(cfg, largest_remainder_sizes(sw.composition_fixed_n, ratios), turbine));
  }
  return report;
}

}  // namespace commshare
