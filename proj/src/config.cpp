#include "commshare/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "commshare/csv.hpp"
#include "commshare/error.hpp"

namespace commshare {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, where + ": " + what);
}

double to_double(const std::string& where, const std::string& text) {
  const auto v = csv::parse_double(text);
  if (!v || !std::isfinite(*v)) bad(where, "expected a number, got '" + text + "'");
  return *v;
}

std::uint64_t to_uint(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    bad(where, "expected a non-negative integer, got '" + text + "'");
  return v;
}

std::vector<std::string> to_list(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& field : csv::split(text, ',')) {
    std::string f = trim(field);
    if (!f.empty()) out.push_back(std::move(f));
  }
  return out;
}

// "10,20,30" or "start:stop:step" (inclusive).
std::vector<std::size_t> to_sizes(const std::string& where, const std::string& text) {
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = csv::split(text, ':');
    if (parts.size() != 3) bad(where, "range must be start:stop:step");
    const auto start = to_uint(where, parts[0]);
    const auto stop = to_uint(where, parts[1]);
    const auto step = to_uint(where, parts[2]);
    if (step == 0 || start > stop) bad(where, "range needs step > 0 and start <= stop");
    for (auto n = start; n <= stop; n += step) out.push_back(static_cast<std::size_t>(n));
    return out;
  }
  for (const auto& f : to_list(text)) out.push_back(static_cast<std::size_t>(to_uint(where, f)));
  return out;
}

// Visits every key of one section, rejecting unknown ones.
class Section {
 public:
  Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (const auto child = root.get_child_optional(name_)) tree_ = &*child;
  }

  const std::string* get(const std::string& key) {
    seen_.insert(key);
    if (tree_ == nullptr) return nullptr;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return nullptr;
    return &it->second.data();
  }

  void number(const std::string& key, double& out) {
    if (const auto* v = get(key)) out = to_double(where(key), *v);
  }
  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const auto* v = get(key)) out = static_cast<Int>(to_uint(where(key), *v));
  }
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void finish() const {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (!seen_.count(key)) bad("[" + name_ + "]", "unknown key '" + key + "'");
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_ = nullptr;
  std::set<std::string> seen_;
};

// Drops trailing "; ..." or "# ..." comments, which the INI reader only
// accepts at the start of a line.
std::string strip_inline_comments(const std::string& text) {
  std::istringstream lines(text);
  std::string out;
  for (std::string line; std::getline(lines, line);) {
    for (std::size_t i = 1; i < line.size(); ++i) {
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

pt::ptree read_tree(const std::string& text) {
  std::istringstream in(strip_inline_comments(text));
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidConfig, e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  return root;
}

void check_sections(const pt::ptree& root, std::initializer_list<const char*> allowed) {
  for (const auto& [name, child] : root) {
    if (child.empty() && !child.data().empty()) bad(name, "key outside of any section");
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return name == a; }))
      bad("[" + name + "]", "unknown section");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(trim(value));
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::vector<double> to_doubles(const std::string& where, const std::string& text) {
  std::vector<double> out;
  for (const auto& f : to_list(text)) out.push_back(to_double(where, f));
  return out;
}

}  // namespace

SweepSettings default_sweep() {
  SweepSettings s;
  s.classes = {{"small", Archetype::m_shape, 3000.0}, {"large", Archetype::stay_at_home, 9000.0}};
  s.composition = {0.9, 0.1};
  for (std::size_t n = 10; n <= 200; n += 10) s.sizes.push_back(n);
  return s;
}

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig cfg;
  cfg.sweep = default_sweep();
  return cfg;
}

std::string to_string(SweepMethod method) {
  switch (method) {
    case SweepMethod::exact: return "exact";
    case SweepMethod::mc: return "mc";
    case SweepMethod::sev: return "sev";
    case SweepMethod::sampling: return "sampling";
  }
  return "unknown";
}

SweepMethod parse_sweep_method(const std::string& name) {
  for (auto m : {SweepMethod::exact, SweepMethod::mc, SweepMethod::sev, SweepMethod::sampling}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown method '" + name + "' (exact, mc, sev, sampling)");
}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const pt::ptree root = read_tree(text);
  check_sections(root, {"battery", "wind", "tariffs", "assets", "sampler", "sweep"});
  ScenarioConfig cfg = ScenarioConfig::defaults();

  Section battery(root, "battery");
  battery.number("soc_min_frac", cfg.battery.soc_min_frac);
  battery.number("soc_max_frac", cfg.battery.soc_max_frac);
  battery.number("eta_c", cfg.battery.eta_c);
  battery.number("eta_d", cfg.battery.eta_d);
  battery.number("c_rate", cfg.battery.c_rate_per_hour);
  if (const auto* v = battery.get("soc_init_frac")) cfg.battery.soc_init_frac = to_double(battery.where("soc_init_frac"), *v);
  if (const auto* v = battery.get("cycle_life_csv")) cfg.cycle_life_csv = resolve(base_dir, *v);
  battery.finish();

  Section wind(root, "wind");
  wind.number("mean_speed_ms", cfg.wind.mean_speed_ms);
  wind.integer("seed", cfg.wind.seed);
  if (const auto* v = wind.get("power_curve_csv")) cfg.wind.power_curve_csv = resolve(base_dir, *v);
  wind.number("scale_per_agent", cfg.assets.wind_scale_per_agent);
  wind.number("rated_kw", cfg.assets.turbine_rated_kw);
  wind.number("cost_per_kw", cfg.assets.wind_cost_per_kw);
  wind.number("lifetime_years", cfg.assets.wind_lifetime_years);
  wind.finish();

  Section tariffs(root, "tariffs");
  tariffs.number("import_pence_per_kwh", cfg.import_pence_per_kwh);
  tariffs.number("export_pence_per_kwh", cfg.export_pence_per_kwh);
  tariffs.finish();

  Section assets(root, "assets");
  assets.number("battery_kwh_per_agent", cfg.assets.battery_kwh_per_agent);
  assets.number("battery_cost_per_kwh", cfg.assets.battery_cost_per_kwh);
  assets.number("battery_lifetime_years", cfg.assets.battery_lifetime_years);
  if (const auto* v = assets.get("sizing")) {
    const std::string s = trim(*v);
    if (s == "scale_with_coalition") cfg.assets.sizing = AssetSizing::scale_with_coalition;
    else if (s == "fixed_community") cfg.assets.sizing = AssetSizing::fixed_community;
    else bad(assets.where("sizing"), "expected scale_with_coalition or fixed_community");
  }
  assets.integer("community_size", cfg.assets.community_size);
  assets.finish();

  Section sampler(root, "sampler");
  sampler.integer("samples_per_agent", cfg.sampler.samples_per_agent);
  sampler.integer("seed", cfg.sampler.seed);
  sampler.number("beta", cfg.sampler.beta);
  sampler.number("gamma", cfg.sampler.gamma);
  sampler.finish();

  Section sweep(root, "sweep");
  auto& sw = cfg.sweep;
  const auto* names = sweep.get("classes");
  const auto* archetypes = sweep.get("archetypes");
  const auto* annual = sweep.get("annual_kwh");
  if (names || archetypes || annual) {
    if (!names || !archetypes || !annual) bad("[sweep]", "classes, archetypes and annual_kwh must be given together");
    const auto n = to_list(*names);
    const auto a = to_list(*archetypes);
    const auto e = to_doubles(sweep.where("annual_kwh"), *annual);
    if (n.size() != a.size() || n.size() != e.size() || n.empty())
      bad("[sweep]", "classes, archetypes and annual_kwh differ in length");
    sw.classes.clear();
    for (std::size_t k = 0; k < n.size(); ++k) sw.classes.push_back({n[k], parse_archetype(a[k]), e[k]});
    if (!sweep.get("composition")) bad("[sweep]", "composition is required when classes are given");
  }
  if (const auto* v = sweep.get("composition")) sw.composition = to_doubles(sweep.where("composition"), *v);
  if (const auto* v = sweep.get("sizes")) sw.sizes = to_sizes(sweep.where("sizes"), *v);
  if (const auto* v = sweep.get("methods")) {
    sw.methods.clear();
    for (const auto& m : to_list(*v)) sw.methods.push_back(parse_sweep_method(m));
  }
  sweep.integer("timesteps", sw.timesteps);
  sweep.number("timestep_hours", sw.timestep_hours);
  sweep.integer("data_seed", sw.data_seed);
  if (const auto* v = sweep.get("profile_scaling")) {
    const std::string s = trim(*v);
    if (s == "fixed") sw.profile_scaling = ProfileScaling::fixed;
    else if (s == "total_preserving") sw.profile_scaling = ProfileScaling::total_preserving;
    else bad(sweep.where("profile_scaling"), "expected fixed or total_preserving");
  }
  sweep.integer("composition_fixed_n", sw.composition_fixed_n);
  if (const auto* v = sweep.get("composition_pair")) {
    const auto pair = to_sizes(sweep.where("composition_pair"), *v);
    if (pair.size() != 2 || pair[0] == pair[1]) bad(sweep.where("composition_pair"), "expected two distinct class indices");
    sw.composition_pair[0] = pair[0];
    sw.composition_pair[1] = pair[1];
  }
  sweep.number("composition_step", sw.composition_step);
  sweep.integer("composition_points", sw.composition_points);
  sweep.finish();

  // Cross-field checks.
  if (sw.composition.size() != sw.classes.size()) bad("[sweep]", "one composition ratio per class is required");
  double total = 0.0;
  for (double r : sw.composition) {
    if (r < 0.0) bad("[sweep] composition", "ratios must be >= 0");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) bad("[sweep] composition", "ratios must sum to 1");
  for (std::size_t p : sw.composition_pair) {
    if (p >= sw.classes.size()) bad("[sweep] composition_pair", "class index out of range");
  }
  if (sw.timesteps == 0 || !(sw.timestep_hours > 0.0)) bad("[sweep]", "timesteps and timestep_hours must be positive");
  if (cfg.sampler.samples_per_agent == 0) bad("[sampler] samples_per_agent", "must be positive");
  try {
    cfg.battery.sized(1.0).validate();
    cfg.assets.validate();
  } catch (const Error& e) {
    bad("config", e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

SyntheticSpec parse_synthetic_spec(const std::string& text) {
  const pt::ptree root = read_tree(text);
  check_sections(root, {"community"});
  Section c(root, "community");
  SyntheticSpec spec;
  const auto* names = c.get("classes");
  const auto* archetypes = c.get("archetypes");
  const auto* sizes = c.get("sizes");
  const auto* annual = c.get("annual_kwh");
  if (!archetypes || !sizes) bad("[community]", "archetypes and sizes are required");
  const auto a = to_list(*archetypes);
  const auto s = to_sizes(c.where("sizes"), *sizes);
  const auto n = names ? to_list(*names) : std::vector<std::string>{};
  const auto e = annual ? to_doubles(c.where("annual_kwh"), *annual) : std::vector<double>(a.size(), 3500.0);
  if (a.empty() || s.size() != a.size() || e.size() != a.size() || (!n.empty() && n.size() != a.size()))
    bad("[community]", "class lists differ in length");
  for (std::size_t k = 0; k < a.size(); ++k) {
    spec.classes.push_back({n.empty() ? a[k] : n[k], parse_archetype(a[k]), s[k], e[k]});
  }
  c.number("noise", spec.noise);
  c.integer("seed", spec.seed);
  c.integer("timesteps", spec.timesteps);
  c.number("timestep_hours", spec.timestep_hours);
  c.finish();
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) { return parse_synthetic_spec(read_file(path)); }

CycleLifeTable cycle_life_of(const ScenarioConfig& cfg) {
  return cfg.cycle_life_csv ? load_cycle_life_csv(*cfg.cycle_life_csv) : CycleLifeTable::default_lithium();
}

TariffSchedule tariffs_of(const ScenarioConfig& cfg) {
  return TariffSchedule::flat(cfg.import_pence_per_kwh, cfg.export_pence_per_kwh);
}

GenerationSeries turbine_output_of(const ScenarioConfig& cfg, std::size_t timesteps) {
  const PowerCurve curve = cfg.wind.power_curve_csv ? load_power_curve_csv(*cfg.wind.power_curve_csv)
                                                    : default_turbine_curve();
  return synthetic_turbine_output(timesteps, cfg.wind.seed, cfg.wind.mean_speed_ms, curve);
}

}  // namespace commshare
