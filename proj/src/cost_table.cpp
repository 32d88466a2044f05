#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "commshare/allocation.hpp"
#include "commshare/error.hpp"
#include "commshare/parallel.hpp"

namespace commshare {

ClassStructure::ClassStructure(std::vector<std::size_t> sizes, std::vector<std::vector<double>> demands,
                               std::vector<std::string> names) {
  if (sizes.empty()) throw Error(ErrorKind::InvalidSpec, "a community needs at least one class");
  if (!demands.empty() && demands.size() != sizes.size())
    throw Error(ErrorKind::InvalidSpec, "one demand profile per class is required");
  if (!names.empty() && names.size() != sizes.size())
    throw Error(ErrorKind::InvalidSpec, "one name per class is required");
  for (std::size_t s : sizes) {
    if (s == 0) throw Error(ErrorKind::InvalidSpec, "class sizes must be >= 1");
  }
  if (!demands.empty()) {
    const std::size_t len = demands.front().size();
    for (const auto& d : demands) {
      if (d.size() != len) throw Error(ErrorKind::LengthMismatch, "class profiles differ in length");
      for (double v : d) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::NegativeDemand, "class demand must be finite and >= 0");
      }
    }
  }

  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });

  for (std::size_t k : order) {
    sizes_.push_back(sizes[k]);
    if (!demands.empty()) demands_.push_back(std::move(demands[k]));
    names_.push_back(names.empty() ? std::to_string(k) : std::move(names[k]));
    original_index_.push_back(k);
    total_ += sizes[k];
  }
}

std::span<const double> ClassStructure::demand(std::size_t k) const {
  if (demands_.empty()) throw Error(ErrorKind::InvalidSpec, "class structure carries no demand profiles");
  return demands_.at(k);
}

std::vector<double> ClassStructure::aggregate(std::span<const std::size_t> counts) const {
  if (demands_.empty()) throw Error(ErrorKind::InvalidSpec, "class structure carries no demand profiles");
  if (counts.size() != sizes_.size()) throw Error(ErrorKind::InvalidCounts, "count vector has the wrong length");
  std::vector<double> total(demands_.front().size(), 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const double n = static_cast<double>(counts[k]);
    const auto& d = demands_[k];
    for (std::size_t t = 0; t < total.size(); ++t) total[t] += n * d[t];
  }
  return total;
}

CoalitionCostTable::CoalitionCostTable(std::vector<std::size_t> class_sizes)
    : class_sizes_(std::move(class_sizes)), strides_(class_sizes_.size()) {
  if (class_sizes_.empty()) throw Error(ErrorKind::InvalidSpec, "cost table needs at least one class");
  std::size_t cells = 1;
  for (std::size_t k = class_sizes_.size(); k-- > 0;) {
    strides_[k] = cells;
    cells *= class_sizes_[k] + 1;
  }
  values_.assign(cells, std::numeric_limits<double>::quiet_NaN());
}

std::size_t CoalitionCostTable::index(std::span<const std::size_t> counts) const {
  if (counts.size() != class_sizes_.size()) throw Error(ErrorKind::InvalidCounts, "count vector has the wrong length");
  std::size_t i = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > class_sizes_[k]) throw Error(ErrorKind::InvalidCounts, "count exceeds class size");
    i += counts[k] * strides_[k];
  }
  return i;
}

std::vector<std::size_t> CoalitionCostTable::counts_of(std::size_t index) const {
  std::vector<std::size_t> counts(class_sizes_.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    counts[k] = index / strides_[k];
    index %= strides_[k];
  }
  return counts;
}

bool CoalitionCostTable::complete() const {
  return std::none_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); });
}

CoalitionCostTable build_cost_table(const ClassStructure& classes, const CountCostFn& cost_fn) {
  CoalitionCostTable table({classes.sizes().begin(), classes.sizes().end()});
  parallel_for(table.cells(), [&](std::size_t i) {
    const auto counts = table.counts_of(i);
    table.set_index(i, cost_fn(counts));
  });
  table.eval_count = table.cells();
  if (table.at_index(0) != 0.0) throw Error(ErrorKind::InvalidSpec, "cost of the empty coalition must be 0");
  return table;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::exact_naive: return "exact_naive";
    case Method::exact_kclass: return "exact_kclass";
    case Method::marginal_contribution: return "marginal_contribution";
    case Method::sev: return "sev";
    case Method::adaptive_sampling: return "adaptive_sampling";
  }
  return "unknown";
}

double AllocationResult::efficiency_residual() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < costs.size(); ++k) sum += static_cast<double>(class_sizes[k]) * costs[k];
  const double diff = std::abs(sum - community_total);
  return community_total != 0.0 ? diff / std::abs(community_total) : diff;
}

double relative_difference(double estimate, double truth) {
  if (truth == 0.0) throw Error(ErrorKind::ZeroTruth, "relative difference against a zero reference");
  return std::abs(estimate - truth) / std::abs(truth) * 100.0;
}

double average_relative_difference(std::span<const double> per_class_rd, std::span<const std::size_t> class_sizes) {
  if (per_class_rd.size() != class_sizes.size())
    throw Error(ErrorKind::InvalidSpec, "one relative difference per class is required");
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < per_class_rd.size(); ++k) {
    weighted += static_cast<double>(class_sizes[k]) * per_class_rd[k];
    total += static_cast<double>(class_sizes[k]);
  }
  if (total == 0.0) throw Error(ErrorKind::InvalidSpec, "class sizes sum to zero");
  return weighted / total;
}

CountCostFn class_game(const CoalitionCostModel& model, const ClassStructure& classes) {
  if (!classes.has_demands()) throw Error(ErrorKind::InvalidSpec, "class game needs demand profiles");
  return [&model, &classes](std::span<const std::size_t> counts) {
    const std::size_t size = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (size == 0) return 0.0;
    return model.evaluate(classes.aggregate(counts), size).total;
  };
}

SetCostFn agent_game(const CoalitionCostModel& model, const DemandMatrix& demands) {
  return [&model, &demands](std::span<const std::size_t> members) {
    if (members.empty()) return 0.0;
    return model.evaluate(aggregate_demand(demands, members), members.size()).total;
  };
}

ProfileCostFn profile_game(const CoalitionCostModel& model) {
  return [&model](std::span<const double> demand, std::size_t size) {
    if (size == 0) return 0.0;
    return model.evaluate(demand, size).total;
  };
}

}  // namespace commshare
