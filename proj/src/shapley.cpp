#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "commshare/allocation.hpp"
#include "commshare/error.hpp"
#include "commshare/hypergeometric.hpp"
#include "commshare/parallel.hpp"

namespace commshare {

namespace {

void check_table(const CoalitionCostTable& table, const ClassStructure& classes) {
  const auto a = table.class_sizes();
  const auto b = classes.sizes();
  if (!std::equal(a.begin(), a.end(), b.begin(), b.end()))
    throw Error(ErrorKind::IncompleteTable, "cost table shape does not match the class structure");
  if (!table.complete()) throw Error(ErrorKind::IncompleteTable, "cost table has unevaluated cells");
}

// Shapley value of one member of class k (k >= 1 in sorted order).
double class_value(const CoalitionCostTable& table, std::span<const std::size_t> sizes, std::size_t k,
                   const LogBinomial& log_binom) {
  const std::size_t n_total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  const std::size_t others = n_total - 1;
  std::vector<std::size_t> caps(sizes.begin(), sizes.end());
  caps[k] -= 1;

  // Walk every count vector of the other N-1 agents once, accumulating into
  // its stratum j = sum of counts.
  std::vector<double> stratum_sum(n_total, 0.0);
  std::vector<std::size_t> counts(caps.size(), 0);
  std::vector<std::size_t> with_k(caps.size(), 0);
  while (true) {
    const std::size_t j = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    double log_p = -log_binom(others, j);
    for (std::size_t q = 0; q < caps.size(); ++q) log_p += log_binom(caps[q], counts[q]);
    with_k = counts;
    with_k[k] += 1;
    stratum_sum[j] += std::exp(log_p) * (table.at(with_k) - table.at(counts));

    std::size_t q = caps.size();
    while (q-- > 0) {
      if (counts[q] < caps[q]) {
        ++counts[q];
        break;
      }
      counts[q] = 0;
    }
    if (q == static_cast<std::size_t>(-1)) break;
  }

  double phi = 0.0;
  for (double s : stratum_sum) phi += s;
  return phi / static_cast<double>(n_total);
}

}  // namespace

AllocationResult exact_shapley_kclass(const CoalitionCostTable& table, const ClassStructure& classes) {
  check_table(table, classes);
  const auto sizes = classes.sizes();
  const std::size_t n_total = classes.total();
  const double grand = table.grand_coalition();

  AllocationResult result;
  result.method = Method::exact_kclass;
  result.class_sizes.assign(sizes.begin(), sizes.end());
  result.community_total = grand;
  result.costs.assign(sizes.size(), 0.0);

  if (sizes.size() > 1) {
    const LogBinomial log_binom(n_total);
    parallel_for(sizes.size() - 1, [&](std::size_t i) {
      result.costs[i + 1] = class_value(table, sizes, i + 1, log_binom);
    });
  }
  double rest = grand;
  for (std::size_t k = 1; k < sizes.size(); ++k) rest -= static_cast<double>(sizes[k]) * result.costs[k];
  result.costs[0] = rest / static_cast<double>(sizes[0]);
  return result;
}

AllocationResult exact_shapley_naive(std::size_t agents, const SetCostFn& cost_fn, std::size_t max_agents) {
  if (agents == 0) throw Error(ErrorKind::InvalidSpec, "no agents");
  if (agents > max_agents || agents >= 8 * sizeof(std::size_t) - 1)
    throw Error(ErrorKind::TooManyAgents,
                std::to_string(agents) + " agents exceed the limit of " + std::to_string(max_agents));

  const std::size_t subsets = std::size_t{1} << agents;
  std::vector<double> value(subsets, 0.0);
  parallel_for(subsets, [&](std::size_t mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < agents; ++i) {
      if (mask & (std::size_t{1} << i)) members.push_back(i);
    }
    value[mask] = cost_fn(members);
  });
  if (value[0] != 0.0) throw Error(ErrorKind::InvalidSpec, "cost of the empty coalition must be 0");

  // weight(s) = s! (N-s-1)! / N! = 1 / (N * C(N-1, s))
  std::vector<double> weight(agents);
  double binom = 1.0;  // C(N-1, s), exact in double for any admissible N
  for (std::size_t s = 0; s < agents; ++s) {
    weight[s] = 1.0 / (static_cast<double>(agents) * binom);
    binom = binom * static_cast<double>(agents - 1 - s) / static_cast<double>(s + 1);
  }

  AllocationResult result;
  result.method = Method::exact_naive;
  result.class_sizes.assign(agents, 1);
  result.community_total = value[subsets - 1];
  result.evaluations = subsets;
  result.costs.assign(agents, 0.0);

  parallel_for(agents - 1, [&](std::size_t i) {
    const std::size_t bit = std::size_t{1} << i;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      phi += weight[static_cast<std::size_t>(std::popcount(mask))] * (value[mask | bit] - value[mask]);
    }
    result.costs[i] = phi;
  });
  double rest = result.community_total;
  for (std::size_t i = 0; i + 1 < agents; ++i) rest -= result.costs[i];
  result.costs[agents - 1] = rest;
  return result;
}

}  // namespace commshare
