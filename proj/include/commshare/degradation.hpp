#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace commshare {

enum class CycleKind { full, half };
enum class Regularity { regular, irregular };

/// One rainflow cycle. SoC values are percent of SoC^max. Full cycles are
/// recorded from their peak to their trough, so a full cycle is regular
/// exactly when its peak is 100%. Half cycles keep their time direction.
struct Cycle {
  CycleKind kind = CycleKind::half;
  Regularity regularity = Regularity::irregular;
  double dod_percent = 0.0;
  double soc_start_percent = 0.0;
  double soc_end_percent = 0.0;
};

/// Battery life in cycles as a function of depth of discharge. Lookups
/// interpolate linearly between knots and clamp outside the knot range.
class CycleLifeTable {
 public:
  CycleLifeTable() = default;
  explicit CycleLifeTable(std::vector<std::pair<double, double>> knots);

  double max_cycles(double dod_percent) const;
  bool empty() const noexcept { return knots_.empty(); }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

  // Synthetic lithium-ion curve N(DoD) = 300000 / DoD, knots from 1% to
  // 100% DoD (3000 cycles at full depth). Life below 1% DoD is clamped.
  static CycleLifeTable default_lithium();

 private:
  std::vector<std::pair<double, double>> knots_;
};

CycleLifeTable load_cycle_life_csv(const std::filesystem::path& path);

// Tolerance, in SoC percent, for treating a level as completely full and for
// matching equal endpoints.
inline constexpr double kSocPercentTolerance = 1e-9;

/// Turning points of the series: plateaus collapse to one point and the
/// first and last samples are always kept.
std::vector<double> extract_reversals(std::span<const double> soc_percent);

/// Incremental turning-point filter for long traces.
class ReversalTracker {
 public:
  void push(double value);
  // Reversal sequence including the most recent sample.
  std::vector<double> finish() const;

 private:
  std::vector<double> points_;
};

/// Four-point rainflow count on the reversal sequence of soc_percent.
/// The residue is resolved as follows: if it starts and ends at the same
/// level it is a closed history and yields only full cycles; otherwise each
/// excursion of the form 100 -> x -> 100 is a full cycle and the remaining
/// ranges are half cycles.
std::vector<Cycle> rainflow_count(std::span<const double> soc_percent);

// Same as rainflow_count but the input is already a reversal sequence.
std::vector<Cycle> rainflow_count_reversals(std::vector<double> reversals);

double dod_equivalent(double soc_percent);

double depreciation_factor(std::span<const Cycle> cycles, const CycleLifeTable& table);

}  // namespace commshare
