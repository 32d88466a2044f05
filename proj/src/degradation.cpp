#include "commshare/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commshare/csv.hpp"
#include "commshare/error.hpp"

namespace commshare {

namespace {

bool is_full_level(double soc_percent) { return soc_percent >= 100.0 - kSocPercentTolerance; }

Cycle full_cycle(double a, double b) {
  Cycle c;
  c.kind = CycleKind::full;
  c.soc_start_percent = std::max(a, b);
  c.soc_end_percent = std::min(a, b);
  c.dod_percent = c.soc_start_percent - c.soc_end_percent;
  c.regularity = is_full_level(c.soc_start_percent) ? Regularity::regular : Regularity::irregular;
  return c;
}

Cycle half_cycle(double from, double to) {
  Cycle c;
  c.kind = CycleKind::half;
  c.soc_start_percent = from;
  c.soc_end_percent = to;
  c.dod_percent = std::abs(from - to);
  c.regularity = is_full_level(from) ? Regularity::regular : Regularity::irregular;
  return c;
}

// Four-point extraction. Appends full cycles to `cycles` and returns the residue.
std::vector<double> four_point(const std::vector<double>& reversals, std::vector<Cycle>& cycles) {
  std::vector<double> stack;
  stack.reserve(reversals.size());
  for (double x : reversals) {
    stack.push_back(x);
    while (stack.size() >= 4) {
      const std::size_t n = stack.size();
      const double a = stack[n - 4], b = stack[n - 3], c = stack[n - 2], d = stack[n - 1];
      const double inner = std::abs(b - c);
      if (inner <= std::abs(a - b) && inner <= std::abs(c - d)) {
        cycles.push_back(full_cycle(b, c));
        stack[n - 3] = d;
        stack.resize(n - 2);
      } else {
        break;
      }
    }
  }
  return stack;
}

void resolve_open(const std::vector<double>& residue, std::vector<Cycle>& cycles) {
  std::size_t i = 0;
  while (i + 1 < residue.size()) {
    if (i + 2 < residue.size() && is_full_level(residue[i]) && is_full_level(residue[i + 2])) {
      cycles.push_back(full_cycle(residue[i], residue[i + 1]));
      i += 2;
    } else {
      cycles.push_back(half_cycle(residue[i], residue[i + 1]));
      i += 1;
    }
  }
}

void resolve_closed(const std::vector<double>& residue, std::vector<Cycle>& cycles) {
  // Treat the residue as one period of a repeating history: rotate it to
  // start at its maximum and run the four-point pass again.
  std::vector<double> loop(residue.begin(), residue.end() - 1);
  const auto peak = std::max_element(loop.begin(), loop.end());
  std::rotate(loop.begin(), peak, loop.end());
  loop.push_back(loop.front());
  const auto remaining = four_point(extract_reversals(loop), cycles);
  if (remaining.size() == 3) {
    cycles.push_back(full_cycle(remaining[0], remaining[1]));
  } else {
    resolve_open(remaining, cycles);
  }
}

}  // namespace

CycleLifeTable::CycleLifeTable(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw Error(ErrorKind::EmptyTable, "cycle life table has no knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto [dod, cycles] = knots_[i];
    if (!std::isfinite(dod) || !std::isfinite(cycles) || !(cycles > 0.0))
      throw Error(ErrorKind::InvalidSpec, "cycle life knot " + std::to_string(i) + " is invalid");
    if (i > 0 && !(dod > knots_[i - 1].first))
      throw Error(ErrorKind::InvalidSpec, "cycle life DoD values must be strictly increasing");
    if (i > 0 && cycles > knots_[i - 1].second)
      throw Error(ErrorKind::InvalidSpec, "cycle life must be non-increasing in DoD");
  }
}

double CycleLifeTable::max_cycles(double dod) const {
  if (knots_.empty()) throw Error(ErrorKind::EmptyTable, "cycle life table has no knots");
  if (dod <= knots_.front().first) return knots_.front().second;
  if (dod >= knots_.back().first) return knots_.back().second;
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), dod,
                                      [](double x, const auto& knot) { return x < knot.first; });
  const auto& [d1, n1] = *upper;
  const auto& [d0, n0] = *(upper - 1);
  return n0 + (n1 - n0) * (dod - d0) / (d1 - d0);
}

CycleLifeTable CycleLifeTable::default_lithium() {
  std::vector<std::pair<double, double>> knots;
  for (int dod = 1; dod <= 100; ++dod) knots.emplace_back(dod, 300000.0 / dod);
  return CycleLifeTable(std::move(knots));
}

CycleLifeTable load_cycle_life_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  std::vector<std::pair<double, double>> knots;
  for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
    if (lines[line_no].empty()) continue;
    const auto fields = csv::split(lines[line_no]);
    if (fields.size() != 2) throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no));
    const auto dod = csv::parse_double(fields[0]);
    const auto cycles = csv::parse_double(fields[1]);
    if (!dod || !cycles) throw Error(ErrorKind::MalformedRow, "row " + std::to_string(line_no));
    knots.emplace_back(*dod, *cycles);
  }
  return CycleLifeTable(std::move(knots));
}

void ReversalTracker::push(double value) {
  const std::size_t n = points_.size();
  if (n == 0) {
    points_.push_back(value);
    return;
  }
  if (value == points_.back()) return;
  if (n >= 2 && (points_[n - 1] - points_[n - 2]) * (value - points_[n - 1]) > 0.0) {
    points_.back() = value;
    return;
  }
  points_.push_back(value);
}

std::vector<double> ReversalTracker::finish() const { return points_; }

std::vector<double> extract_reversals(std::span<const double> soc_percent) {
  ReversalTracker tracker;
  for (double v : soc_percent) tracker.push(v);
  return tracker.finish();
}

std::vector<Cycle> rainflow_count_reversals(std::vector<double> reversals) {
  std::vector<Cycle> cycles;
  const auto residue = four_point(reversals, cycles);
  if (residue.size() >= 3 && std::abs(residue.front() - residue.back()) <= kSocPercentTolerance) {
    resolve_closed(residue, cycles);
  } else {
    resolve_open(residue, cycles);
  }
  return cycles;
}

std::vector<Cycle> rainflow_count(std::span<const double> soc_percent) {
  return rainflow_count_reversals(extract_reversals(soc_percent));
}

double dod_equivalent(double soc_percent) {
  if (!(soc_percent >= -kSocPercentTolerance && soc_percent <= 100.0 + kSocPercentTolerance))
    throw Error(ErrorKind::OutOfRange, "SoC " + std::to_string(soc_percent) + "% outside [0, 100]");
  return std::clamp(100.0 - soc_percent, 0.0, 100.0);
}

double depreciation_factor(std::span<const Cycle> cycles, const CycleLifeTable& table) {
  if (table.empty()) throw Error(ErrorKind::EmptyTable, "cycle life table has no knots");
  double regular = 0.0;
  double irregular = 0.0;
  for (const Cycle& c : cycles) {
    const double weight = c.kind == CycleKind::full ? 1.0 : 0.5;
    if (c.regularity == Regularity::regular) {
      regular += weight / table.max_cycles(c.dod_percent);
    } else {
      const double at_start = 1.0 / table.max_cycles(dod_equivalent(c.soc_start_percent));
      const double at_end = 1.0 / table.max_cycles(dod_equivalent(c.soc_end_percent));
      irregular += weight * std::abs(at_start - at_end);
    }
  }
  return regular + irregular;
}

}  // namespace commshare
