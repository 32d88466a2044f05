#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commshare/allocation.hpp"
#include "commshare/config.hpp"
#include "commshare/csv.hpp"
#include "commshare/error.hpp"
#include "commshare/experiments.hpp"
#include "commshare/profiles.hpp"
#include "commshare/simulation.hpp"
#include "commshare/timeseries.hpp"

namespace fs = std::filesystem;
using namespace commshare;

namespace {

ScenarioConfig config_or_defaults(const std::string& path) {
  return path.empty() ? ScenarioConfig::defaults() : load_config(path);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

// The demand file fixes the horizon; the config only supplies the step.
DemandMatrix load_demand(const fs::path& path, double timestep_hours) {
  const RawDemand raw = load_raw_demand_csv(path);
  const std::size_t len = raw.rows.empty() ? 0 : raw.rows.front().size();
  return load_demand_csv(path, len, timestep_hours);
}

std::vector<std::size_t> all_members(std::size_t n) {
  std::vector<std::size_t> members(n);
  std::iota(members.begin(), members.end(), std::size_t{0});
  return members;
}

int run_simulate(const std::string& demand_path, const std::string& generation_path, const std::string& config_path,
                 const fs::path& out) {
  const ScenarioConfig cfg = config_or_defaults(config_path);
  const DemandMatrix demands = load_demand(demand_path, cfg.sweep.timestep_hours);
  const GenerationSeries generation = load_generation_csv(generation_path, demands.timesteps());

  AssetConfig assets = cfg.assets;
  if (assets.community_size == 0) assets.community_size = demands.agents();
  const CoalitionCostModel model(generation, cfg.battery, tariffs_of(cfg), assets, cycle_life_of(cfg),
                                 demands.timestep_hours());
  const auto members = all_members(demands.agents());
  const auto aggregate = aggregate_demand(demands, members);

  fs::create_directories(out);
  write_trace_csv(out / "trace.csv", model.trace(aggregate, demands.agents()));
  const CoalitionCost cost = model.evaluate(aggregate, demands.agents());
  auto f = open_out(out / "cost.csv");
  f << "component,value\n";
  f << "grid_gbp," << csv::format_double(cost.grid) << "\n";
  f << "wind_gbp," << csv::format_double(cost.wind) << "\n";
  f << "battery_gbp," << csv::format_double(cost.battery) << "\n";
  f << "total_gbp," << csv::format_double(cost.total) << "\n";
  f << "depreciation_factor," << csv::format_double(cost.df) << "\n";
  f << "agents," << demands.agents() << "\n";
  std::cout << "community cost " << csv::format_fixed(cost.total, 2) << " GBP for " << demands.agents()
            << " agents\n";
  return 0;
}

// agent_id,class mapping -> class labels in first-seen order and members.
struct ClassAssignment {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> members;
};

ClassAssignment load_classes(const fs::path& path, const DemandMatrix& demands) {
  std::map<std::string, std::size_t> agent_index;
  for (std::size_t i = 0; i < demands.agents(); ++i) agent_index[demands.agent_ids()[i]] = i;

  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw Error(ErrorKind::MalformedRow, path.string() + ": missing header agent_id,class");
  ClassAssignment out;
  std::map<std::string, std::size_t> label_index;
  std::vector<bool> seen(demands.agents(), false);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto cells = csv::split(lines[ln]);
    if (cells.size() != 2) throw Error(ErrorKind::MalformedRow, "row " + std::to_string(ln) + ": expected 2 cells");
    const auto agent = agent_index.find(cells[0]);
    if (agent == agent_index.end())
      throw Error(ErrorKind::IndexOutOfRange, "row " + std::to_string(ln) + ": unknown agent " + cells[0]);
    if (seen[agent->second]) throw Error(ErrorKind::MalformedRow, "agent " + cells[0] + " listed twice");
    seen[agent->second] = true;
    auto [it, inserted] = label_index.try_emplace(cells[1], out.labels.size());
    if (inserted) {
      out.labels.push_back(cells[1]);
      out.members.emplace_back();
    }
    out.members[it->second].push_back(agent->second);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw Error(ErrorKind::InvalidSpec, "agent " + demands.agent_ids()[i] + " has no class");
  return out;
}

struct Row {
  std::string method;
  std::string id;
  std::size_t size;
  double cost;
  std::optional<double> rd;
  std::size_t evaluations;
};

void write_allocations(const fs::path& path, const std::vector<Row>& rows) {
  auto f = open_out(path);
  f << "method,class_id,class_size,cost_gbp,rd_vs_exact_percent,evaluations\n";
  for (const auto& r : rows) {
    f << r.method << "," << r.id << "," << r.size << "," << csv::format_double(r.cost) << ","
      << (r.rd ? csv::format_double(*r.rd) : std::string{}) << "," << r.evaluations << "\n";
  }
}

int run_allocate(const std::string& demand_path, const std::string& classes_path, const std::string& method,
                 const std::string& config_path, const fs::path& out) {
  const ScenarioConfig cfg = config_or_defaults(config_path);
  const DemandMatrix demands = load_demand(demand_path, cfg.sweep.timestep_hours);
  const std::size_t n = demands.agents();
  const bool all = method == "all";
  const auto want = [&](const char* m) { return all || method == m; };

  AssetConfig assets = cfg.assets;
  assets.community_size = n;
  const CoalitionCostModel model(turbine_output_of(cfg, demands.timesteps()), cfg.battery, tariffs_of(cfg), assets,
                                 cycle_life_of(cfg), demands.timestep_hours());

  std::vector<AllocationResult> results;
  std::vector<std::string> ids;
  std::vector<std::size_t> sizes;
  std::optional<std::vector<double>> truth;

  if (!classes_path.empty()) {
    const ClassAssignment assign = load_classes(classes_path, demands);
    std::vector<std::size_t> class_sizes;
    std::vector<std::vector<double>> means;
    for (const auto& members : assign.members) {
      class_sizes.push_back(members.size());
      auto mean = aggregate_demand(demands, members);
      for (double& v : mean) v /= static_cast<double>(members.size());
      means.push_back(std::move(mean));
    }
    const ClassStructure classes(class_sizes, means, assign.labels);
    for (std::size_t k = 0; k < classes.classes(); ++k) {
      ids.push_back(classes.name(k));
      sizes.push_back(classes.size(k));
    }
    // The exact values are the reference for every RD, so the table is
    // always built.
    const CoalitionCostTable table = build_cost_table(classes, class_game(model, classes));
    AllocationResult exact = exact_shapley_kclass(table, classes);
    exact.evaluations = table.eval_count;
    truth = exact.costs;
    if (want("exact")) results.push_back(exact);
    if (want("mc")) results.push_back(marginal_contribution_alloc(table, classes));
    if (want("sev")) results.push_back(sev_alloc(classes, profile_game(model), table.grand_coalition()));
    if (want("sampling")) results.push_back(adaptive_sampling_alloc(table, classes, cfg.sampler));
  } else {
    const SetCostFn game = agent_game(model, demands);
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back(demands.agent_ids()[i]);
      sizes.push_back(1);
    }
    constexpr std::size_t kNaiveLimit = 16;
    if (n <= kNaiveLimit) {
      AllocationResult exact = exact_shapley_naive(n, game, kNaiveLimit);
      truth = exact.costs;
      if (want("exact")) results.push_back(std::move(exact));
    } else if (method == "exact") {
      throw Error(ErrorKind::TooManyAgents, "exact allocation without --classes supports up to " +
                                                std::to_string(kNaiveLimit) + " agents");
    }
    if (want("mc")) results.push_back(marginal_contribution_alloc(n, game));
    if (want("sev")) results.push_back(sev_alloc(demands, profile_game(model)));
    if (want("sampling")) results.push_back(adaptive_sampling_alloc(n, game, cfg.sampler));
  }

  std::vector<Row> rows;
  for (const auto& r : results) {
    for (std::size_t k = 0; k < r.costs.size(); ++k) {
      std::optional<double> rd;
      if (truth && (*truth)[k] != 0.0) rd = relative_difference(r.costs[k], (*truth)[k]);
      rows.push_back({std::string(to_string(r.method)), ids[k], sizes[k], r.costs[k], rd, r.evaluations});
    }
  }
  fs::create_directories(out);
  write_allocations(out / "allocations.csv", rows);
  std::cout << "wrote " << rows.size() << " allocation rows to " << (out / "allocations.csv").string() << "\n";
  return 0;
}

int run_sweep(bool composition, const std::string& config_path, const fs::path& out) {
  const ScenarioConfig cfg = config_or_defaults(config_path);
  const auto start = std::chrono::steady_clock::now();
  const ExperimentReport report = composition ? run_composition_sweep(cfg) : run_size_sweep(cfg);
  emit_report(report, out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << report.points.size() << " scenario points in " << csv::format_fixed(secs, 1) << " s; results in "
            << out.string() << "\n";
  return 0;
}

std::chrono::year_month_day parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char a = 0, b = 0;
  std::istringstream in(text);
  in >> y >> a >> m >> b >> d;
  const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!in || a != '-' || b != '-' || !date.ok()) throw Error(ErrorKind::InvalidSpec, "bad date " + text);
  return date;
}

int run_cluster(const std::string& demand_path, std::size_t k, std::uint64_t seed, const std::string& start,
                double min_coverage, const fs::path& out) {
  const RawDemand raw = filter_by_coverage(load_raw_demand_csv(demand_path), min_coverage);
  const auto first_day = parse_date(start);
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto filled = interpolate_missing(raw.rows[i]);
    const auto mean = daily_mean_profile(filter_winter_weekdays(filled, first_day));
    try {
      rows.push_back(l2_normalize(mean));
      ids.push_back(raw.agent_ids[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroVector) throw;
      ++skipped;
    }
  }
  if (rows.empty()) throw Error(ErrorKind::InvalidSpec, "no agents left to cluster");
  const ClusterModel model = kmeans(rows, k, seed);

  fs::create_directories(out);
  auto assign = open_out(out / "clusters.csv");
  assign << "agent_id,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i) assign << ids[i] << "," << model.assignments[i] << "\n";
  auto cent = open_out(out / "centroids.csv");
  cent << "cluster";
  for (std::size_t s = 0; s < kStepsPerDay; ++s) cent << ",h" << (s < 10 ? "0" : "") << s;
  cent << "\n";
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    cent << c;
    for (double v : model.centroids[c]) cent << "," << csv::format_double(v);
    cent << "\n";
  }
  std::cout << ids.size() << " agents in " << model.k << " clusters (" << raw.agent_ids.size()
            << " passed coverage, " << skipped << " all-zero skipped), inertia "
            << csv::format_double(model.inertia) << "\n";
  return 0;
}

int run_synth(const std::string& spec_path, const fs::path& out, const std::string& classes_out,
              const std::string& generation_out, const std::string& config_path) {
  const SyntheticSpec spec = load_synthetic_spec(spec_path);
  const SyntheticCommunity community = generate_synthetic_community(spec);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_demand_csv(out, community.demands);
  if (!classes_out.empty()) {
    auto f = open_out(classes_out);
    f << "agent_id,class\n";
    for (std::size_t i = 0; i < community.demands.agents(); ++i)
      f << community.demands.agent_ids()[i] << "," << spec.classes[community.agent_class[i]].name << "\n";
  }
  if (!generation_out.empty()) {
    const ScenarioConfig cfg = config_or_defaults(config_path);
    const fs::path gen(generation_out);
    if (gen.has_parent_path()) fs::create_directories(gen.parent_path());
    write_generation_csv(gen, turbine_output_of(cfg, spec.timesteps));
  }
  std::cout << community.demands.agents() << " agents x " << community.demands.timesteps() << " steps written to "
            << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy community cost sharing: simulation, Shapley allocation and experiments"};
  app.require_subcommand(1);

  std::string demand, generation, config, classes, method = "all", out, spec, classes_out, generation_out;
  std::string start_date = "2013-01-01";
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double min_coverage = 0.95;

  auto* simulate = app.add_subcommand("simulate", "Dispatch the whole community and price its annual cost");
  simulate->add_option("--demand", demand, "Demand CSV (one column per agent, kW)")->required();
  simulate->add_option("--generation", generation, "Output of one turbine, kW")->required();
  simulate->add_option("--config", config, "INI configuration");
  simulate->add_option("--out", out, "Output directory")->required();

  auto* allocate = app.add_subcommand("allocate", "Share the community cost among agents or classes");
  allocate->add_option("--demand", demand, "Demand CSV")->required();
  allocate->add_option("--classes", classes, "agent_id,class CSV; omit to treat every agent separately");
  allocate->add_option("--method", method, "Allocation method")
      ->check(CLI::IsMember({"exact", "mc", "sev", "sampling", "all"}));
  allocate->add_option("--config", config, "INI configuration");
  allocate->add_option("--out", out, "Output directory")->required();

  auto* sweep_size = app.add_subcommand("sweep-size", "Accuracy of the approximations against community size");
  sweep_size->add_option("--config", config, "INI configuration");
  sweep_size->add_option("--out", out, "Output directory")->required();

  auto* sweep_comp = app.add_subcommand("sweep-composition", "Accuracy against community composition");
  sweep_comp->add_option("--config", config, "INI configuration");
  sweep_comp->add_option("--out", out, "Output directory")->required();

  auto* cluster = app.add_subcommand("cluster", "Group agents by normalised winter weekday profile");
  cluster->add_option("--demand", demand, "Half-hourly demand CSV, may contain gaps")->required();
  cluster->add_option("--k", k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--seed", seed, "Seed for the k-means++ start")->required();
  cluster->add_option("--start-date", start_date, "Date of the first row, YYYY-MM-DD");
  cluster->add_option("--min-coverage", min_coverage, "Drop agents with fewer present readings")
      ->check(CLI::Range(0.0, 1.0));
  cluster->add_option("--out", out, "Output directory")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic community");
  synth->add_option("--spec", spec, "Community description (INI)")->required();
  synth->add_option("--out", out, "Demand CSV to write")->required();
  synth->add_option("--classes-out", classes_out, "Also write the agent_id,class mapping");
  synth->add_option("--generation-out", generation_out, "Also write one turbine's output for the horizon");
  synth->add_option("--config", config, "INI configuration for the wind settings");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(demand, generation, config, out);
    if (*allocate) return run_allocate(demand, classes, method, config, out);
    if (*sweep_size) return run_sweep(false, config, out);
    if (*sweep_comp) return run_sweep(true, config, out);
    if (*cluster) return run_cluster(demand, k, seed, start_date, min_coverage, out);
    if (*synth) return run_synth(spec, out, classes_out, generation_out, config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
