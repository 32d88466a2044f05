#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "acceptance/oracles.hpp"
#include "commshare/allocation.hpp"

namespace testing {

// A cheap nonlinear coalition cost on aggregate profiles: shared capacity
// 0.6 kW per member absorbs demand, the excess is priced convexly, and each
// member adds a fixed charge.
inline double toy_profile_cost(std::span<const double> demand, std::size_t size) {
  if (size == 0) return 0.0;
  const double cap = 0.6 * static_cast<double>(size);
  double excess = 0.0;
  for (double d : demand) excess += std::pow(std::max(0.0, d - cap), 1.5);
  return excess + 0.3 * static_cast<double>(size);
}

// Per-class shapes plus games over counts, agent sets and bitmasks, all
// backed by toy_profile_cost.
struct ToyCommunity {
  std::vector<std::size_t> sizes;           // in the order given
  std::vector<std::vector<double>> shapes;  // one per class
  std::vector<std::size_t> labels;          // class of every agent

  ToyCommunity(std::vector<std::size_t> class_sizes, std::uint64_t seed, std::size_t steps = 48)
      : sizes(std::move(class_sizes)), labels(oracle::class_labels(sizes)) {
    for (std::size_t k = 0; k < sizes.size(); ++k) shapes.push_back(oracle::smooth_shape(seed * 31 + k, steps));
  }

  commshare::ClassStructure structure() const { return commshare::ClassStructure(sizes, shapes); }

  double by_counts_original(std::span<const std::size_t> counts) const {
    std::vector<double> d(shapes.front().size(), 0.0);
    std::size_t n = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      n += counts[k];
      for (std::size_t t = 0; t < d.size(); ++t) d[t] += static_cast<double>(counts[k]) * shapes[k][t];
    }
    return toy_profile_cost(d, n);
  }

  double by_mask(std::uint64_t mask) const {
    std::vector<std::size_t> counts(sizes.size(), 0);
    for (std::size_t a = 0; a < labels.size(); ++a)
      if (mask & (std::uint64_t{1} << a)) ++counts[labels[a]];
    return by_counts_original(counts);
  }

  double by_members(std::span<const std::size_t> members) const {
    std::uint64_t mask = 0;
    for (std::size_t a : members) mask |= std::uint64_t{1} << a;
    return by_mask(mask);
  }

  commshare::DemandMatrix demands() const {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      ids.push_back("agent" + std::to_string(a));
      rows.push_back(shapes[labels[a]]);
    }
    return commshare::DemandMatrix(ids, rows);
  }

  std::size_t total() const { return labels.size(); }
};

// CountCostFn over the sorted class order of `structure`.
inline commshare::CountCostFn sorted_count_game(const ToyCommunity& toy, const commshare::ClassStructure& structure) {
  return [&toy, &structure](std::span<const std::size_t> sorted_counts) {
    std::vector<std::size_t> original(sorted_counts.size());
    for (std::size_t k = 0; k < sorted_counts.size(); ++k) original[structure.original_index(k)] = sorted_counts[k];
    return toy.by_counts_original(original);
  };
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
