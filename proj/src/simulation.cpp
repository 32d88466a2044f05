#include "commshare/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "commshare/csv.hpp"
#include "commshare/error.hpp"

namespace commshare {

void BatterySpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); };
  if (!std::isfinite(capacity_kwh) || capacity_kwh < 0.0) fail("battery capacity must be >= 0");
  if (!std::isfinite(p_max_kw) || p_max_kw < 0.0) fail("battery power limit must be >= 0");
  if (!(soc_min_frac >= 0.0 && soc_min_frac < soc_max_frac && soc_max_frac <= 1.0))
    fail("need 0 <= soc_min_frac < soc_max_frac <= 1");
  if (!(eta_c > 0.0 && eta_c <= 1.0) || !(eta_d > 0.0 && eta_d <= 1.0))
    fail("efficiencies must lie in (0, 1]");
  const double init = soc_init_frac.value_or(soc_min_frac);
  if (!(init >= soc_min_frac && init <= soc_max_frac)) fail("initial SoC outside [soc_min, soc_max]");
}

BatterySpec BatteryTemplate::sized(double capacity_kwh) const {
  BatterySpec spec;
  spec.capacity_kwh = capacity_kwh;
  spec.soc_min_frac = soc_min_frac;
  spec.soc_max_frac = soc_max_frac;
  spec.p_max_kw = c_rate_per_hour * capacity_kwh;
  spec.eta_c = eta_c;
  spec.eta_d = eta_d;
  spec.soc_init_frac = soc_init_frac;
  return spec;
}

BatteryController::BatteryController(const BatterySpec& spec, double timestep_hours)
    : soc_min_(spec.soc_min_kwh()),
      soc_max_(spec.soc_max_kwh()),
      p_max_(spec.p_max_kw),
      eta_c_(spec.eta_c),
      eta_d_(spec.eta_d),
      dt_(timestep_hours),
      soc_(spec.soc_init_kwh()) {
  spec.validate();
  if (!(timestep_hours > 0.0)) throw Error(ErrorKind::InvalidSpec, "timestep must be positive");
}

DispatchStep BatteryController::step(double d, double g) {
  DispatchStep out;
  if (g > d) {
    const double surplus = g - d;
    const double headroom = std::max(0.0, (soc_max_ - soc_) / (eta_c_ * dt_));
    const double charge = std::min(std::min(surplus, p_max_), headroom);
    // Snap to the bound when headroom binds so SoC lands exactly on SoC^max.
    soc_ = (charge == headroom) ? soc_max_ : std::min(soc_max_, soc_ + eta_c_ * charge * dt_);
    out.p_bat = -charge;
    out.p_grid = -(surplus - charge);
    out.e_s = (surplus - charge) * dt_;
  } else if (g < d) {
    const double deficit = d - g;
    const double stored = std::max(0.0, eta_d_ / dt_ * (soc_ - soc_min_));
    const double discharge = std::min(std::min(deficit, p_max_), stored);
    soc_ = (discharge == stored) ? soc_min_ : std::max(soc_min_, soc_ - discharge / eta_d_ * dt_);
    out.p_bat = discharge;
    out.p_grid = deficit - discharge;
    out.e_b = (deficit - discharge) * dt_;
  }
  out.soc = soc_;
  return out;
}

SimulationTrace simulate(std::span<const double> demand, std::span<const double> generation,
                         const BatterySpec& battery, double timestep_hours) {
  if (demand.size() != generation.size())
    throw Error(ErrorKind::LengthMismatch, "demand has " + std::to_string(demand.size()) +
                                               " steps, generation " + std::to_string(generation.size()));
  BatteryController controller(battery, timestep_hours);
  SimulationTrace trace;
  const std::size_t n = demand.size();
  trace.p_bat.resize(n);
  trace.soc.resize(n);
  trace.p_grid.resize(n);
  trace.e_b.resize(n);
  trace.e_s.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const DispatchStep s = controller.step(demand[t], generation[t]);
    trace.p_bat[t] = s.p_bat;
    trace.soc[t] = s.soc;
    trace.p_grid[t] = s.p_grid;
    trace.e_b[t] = s.e_b;
    trace.e_s[t] = s.e_s;
  }
  return trace;
}

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "t,p_bat_kw,soc_kwh,p_grid_kw,e_b_kwh,e_s_kwh\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << t << ',' << csv::format_double(trace.p_bat[t]) << ',' << csv::format_double(trace.soc[t]) << ','
        << csv::format_double(trace.p_grid[t]) << ',' << csv::format_double(trace.e_b[t]) << ','
        << csv::format_double(trace.e_s[t]) << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace commshare
