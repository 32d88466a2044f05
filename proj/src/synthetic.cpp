#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "commshare/error.hpp"
#include "commshare/profiles.hpp"
#include "commshare/random.hpp"

namespace commshare {

namespace {

// Gaussian bump centred at `hour` with width `sd` hours on a 24 h circle.
double bump(double h, double hour, double sd) {
  double d = std::abs(h - hour);
  d = std::min(d, 24.0 - d);
  return std::exp(-0.5 * (d / sd) * (d / sd));
}

struct Bump {
  double hour;
  double sd;
  double height;
};

struct Template {
  double base;
  std::vector<Bump> bumps;
};

Template template_of(Archetype a) {
  switch (a) {
    case Archetype::evening_peak: return {0.25, {{7.5, 1.0, 0.45}, {18.5, 1.6, 1.7}}};
    case Archetype::stay_at_home: return {0.40, {{8.5, 1.5, 0.6}, {13.0, 2.5, 0.7}, {19.0, 2.0, 0.8}}};
    case Archetype::m_shape: return {0.20, {{7.5, 1.2, 1.1}, {20.0, 1.5, 1.1}}};
    case Archetype::night_owl: return {0.30, {{23.0, 2.0, 1.2}, {2.0, 1.5, 0.7}}};
  }
  return {1.0, {}};
}

// Seasonal swing: highest at the start of the year, lowest mid-year.
constexpr double kSeasonalAmplitude = 0.25;

}  // namespace

std::string_view to_string(Archetype archetype) {
  switch (archetype) {
    case Archetype::evening_peak: return "evening_peak";
    case Archetype::stay_at_home: return "stay_at_home";
    case Archetype::m_shape: return "m_shape";
    case Archetype::night_owl: return "night_owl";
  }
  return "unknown";
}

Archetype parse_archetype(std::string_view name) {
  for (Archetype a : {Archetype::evening_peak, Archetype::stay_at_home, Archetype::m_shape, Archetype::night_owl}) {
    if (name == to_string(a)) return a;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown archetype '" + std::string(name) + "'");
}

std::vector<double> archetype_daily_shape(Archetype archetype) {
  const Template tpl = template_of(archetype);
  std::vector<double> shape(kStepsPerDay);
  double sum = 0.0;
  for (std::size_t s = 0; s < kStepsPerDay; ++s) {
    const double h = (static_cast<double>(s) + 0.5) * 24.0 / static_cast<double>(kStepsPerDay);
    double v = tpl.base;
    for (const Bump& b : tpl.bumps) v += b.height * bump(h, b.hour, b.sd);
    shape[s] = v;
    sum += v;
  }
  const double mean = sum / static_cast<double>(kStepsPerDay);
  for (double& v : shape) v /= mean;
  return shape;
}

std::vector<double> archetype_profile(Archetype archetype, double annual_kwh, std::size_t timesteps,
                                      double timestep_hours) {
  if (!(annual_kwh >= 0.0) || !(timestep_hours > 0.0))
    throw Error(ErrorKind::InvalidSpec, "annual energy must be >= 0 and the timestep positive");
  const auto daily = archetype_daily_shape(archetype);
  std::vector<double> out(timesteps);
  double energy = 0.0;
  for (std::size_t t = 0; t < timesteps; ++t) {
    const double hours = static_cast<double>(t) * timestep_hours;
    const double day = std::floor(hours / 24.0);
    const double slot_hours = hours - day * 24.0;
    const auto slot = std::min(kStepsPerDay - 1, static_cast<std::size_t>(slot_hours / 24.0 * kStepsPerDay));
    const double season = 1.0 + kSeasonalAmplitude * std::cos(2.0 * std::numbers::pi * day / 365.0);
    out[t] = daily[slot] * season;
    energy += out[t] * timestep_hours;
  }
  const double target = annual_kwh * static_cast<double>(timesteps) * timestep_hours / 8760.0;
  if (energy > 0.0) {
    for (double& v : out) v *= target / energy;
  }
  return out;
}

SyntheticCommunity generate_synthetic_community(const SyntheticSpec& spec) {
  if (spec.classes.empty()) throw Error(ErrorKind::InvalidSpec, "synthetic community needs at least one class");
  if (!(spec.noise >= 0.0)) throw Error(ErrorKind::InvalidSpec, "noise must be >= 0");

  std::vector<std::vector<double>> templates;
  std::vector<std::size_t> sizes;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const auto& cls = spec.classes[c];
    templates.push_back(archetype_profile(cls.archetype, cls.annual_kwh, spec.timesteps, spec.timestep_hours));
    sizes.push_back(cls.size);
    names.push_back(cls.name.empty() ? std::string(to_string(cls.archetype)) : cls.name);
  }

  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> agent_class;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      const std::size_t agent = rows.size();
      RandomStream rng(spec.seed, agent);
      std::vector<double> row = templates[c];
      if (spec.noise > 0.0) {
        for (double& v : row) v *= std::max(0.0, 1.0 + spec.noise * rng.normal());
      }
      ids.push_back(names[c] + "_" + std::to_string(i + 1));
      rows.push_back(std::move(row));
      agent_class.push_back(c);
    }
  }

  return SyntheticCommunity{DemandMatrix(std::move(ids), std::move(rows), spec.timestep_hours),
                            ClassStructure(std::move(sizes), std::move(templates), std::move(names)),
                            std::move(agent_class)};
}

std::vector<double> synthetic_wind_speeds(std::size_t timesteps, std::uint64_t seed, double mean_speed_ms,
                                          double lag_correlation) {
  if (!(mean_speed_ms > 0.0) || !(lag_correlation >= 0.0 && lag_correlation < 1.0))
    throw Error(ErrorKind::InvalidSpec, "wind mean must be positive and correlation in [0, 1)");
  // Weibull scale for shape 2: mean = lambda * Gamma(1.5).
  const double lambda = mean_speed_ms / std::tgamma(1.5);
  const double innovation = std::sqrt(1.0 - lag_correlation * lag_correlation);
  RandomStream rng(seed, 0x77696e64);
  std::vector<double> speeds(timesteps);
  double z = rng.normal();
  for (std::size_t t = 0; t < timesteps; ++t) {
    if (t > 0) z = lag_correlation * z + innovation * rng.normal();
    const double upper_tail = 0.5 * std::erfc(z / std::numbers::sqrt2);  // 1 - Phi(z)
    speeds[t] = lambda * std::sqrt(-std::log(std::max(upper_tail, 1e-300)));
  }
  return speeds;
}

GenerationSeries synthetic_turbine_output(std::size_t timesteps, std::uint64_t seed, double mean_speed_ms,
                                          const PowerCurve& curve) {
  return wind_power_from_speed(synthetic_wind_speeds(timesteps, seed, mean_speed_ms), curve, 1.0);
}

}  // namespace commshare
