#include <algorithm>
#include <numeric>
#include <string>

#include "allocation_detail.hpp"
#include "commshare/allocation.hpp"
#include "commshare/error.hpp"
#include "commshare/parallel.hpp"

namespace commshare {

namespace {

void require_two(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidSpec, "approximate allocation needs at least two agents");
}

AllocationResult finish(Method method, std::span<const double> raw, std::vector<std::size_t> sizes, double total,
                        std::size_t evaluations) {
  AllocationResult result;
  result.method = method;
  result.costs = detail::normalize_to_total(raw, sizes, total);
  result.class_sizes = std::move(sizes);
  result.community_total = total;
  result.evaluations = evaluations;
  return result;
}

// Mean-profile SEV score for an agent with profile d among n agents whose
// summed profile is total_profile.
double sev_score(std::span<const double> d, std::span<const double> total_profile, std::size_t n,
                 const ProfileCostFn& cost_fn) {
  const std::size_t steps = d.size();
  std::vector<double> mean_other(steps);
  for (std::size_t t = 0; t < steps; ++t)
    mean_other[t] = (total_profile[t] - d[t]) / static_cast<double>(n - 1);

  std::vector<double> mc(n, 0.0);
  parallel_for(n, [&](std::size_t j) {
    const double jd = static_cast<double>(j);
    std::vector<double> without(steps);
    std::vector<double> with(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      without[t] = jd * mean_other[t];
      with[t] = without[t] + d[t];
    }
    const double base = j == 0 ? 0.0 : cost_fn(without, j);
    mc[j] = cost_fn(with, j + 1) - base;
  });

  double sum = 0.0;
  for (double v : mc) sum += v;
  return sum / static_cast<double>(n);
}

}  // namespace

AllocationResult marginal_contribution_alloc(const ClassStructure& classes, const CountCostFn& cost_fn) {
  require_two(classes.total());
  const auto sizes = classes.sizes();
  std::vector<double> costs(sizes.size() + 1);
  parallel_for(sizes.size() + 1, [&](std::size_t i) {
    std::vector<std::size_t> counts(sizes.begin(), sizes.end());
    if (i > 0) counts[i - 1] -= 1;
    costs[i] = cost_fn(counts);
  });
  std::vector<double> mc(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) mc[k] = costs[0] - costs[k + 1];
  return finish(Method::marginal_contribution, mc, {sizes.begin(), sizes.end()}, costs[0], sizes.size() + 1);
}

AllocationResult marginal_contribution_alloc(const CoalitionCostTable& table, const ClassStructure& classes) {
  require_two(classes.total());
  const auto sizes = classes.sizes();
  if (!std::equal(sizes.begin(), sizes.end(), table.class_sizes().begin(), table.class_sizes().end()))
    throw Error(ErrorKind::IncompleteTable, "cost table shape does not match the class structure");
  const double total = table.grand_coalition();
  std::vector<double> mc(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    std::vector<std::size_t> counts(sizes.begin(), sizes.end());
    counts[k] -= 1;
    mc[k] = total - table.at(counts);
  }
  return finish(Method::marginal_contribution, mc, {sizes.begin(), sizes.end()}, total, 0);
}

AllocationResult marginal_contribution_alloc(std::size_t agents, const SetCostFn& cost_fn) {
  require_two(agents);
  std::vector<double> costs(agents + 1);
  parallel_for(agents + 1, [&](std::size_t i) {
    std::vector<std::size_t> members;
    members.reserve(agents);
    for (std::size_t a = 0; a < agents; ++a) {
      if (i == 0 || a != i - 1) members.push_back(a);
    }
    costs[i] = cost_fn(members);
  });
  std::vector<double> mc(agents);
  for (std::size_t a = 0; a < agents; ++a) mc[a] = costs[0] - costs[a + 1];
  return finish(Method::marginal_contribution, mc, std::vector<std::size_t>(agents, 1), costs[0], agents + 1);
}

AllocationResult sev_alloc(const ClassStructure& classes, const ProfileCostFn& cost_fn,
                           std::optional<double> community_total) {
  const std::size_t n = classes.total();
  require_two(n);
  const auto sizes = classes.sizes();
  const std::vector<double> total_profile = classes.aggregate(sizes);

  std::size_t evaluations = 0;
  const double total = community_total ? *community_total : (++evaluations, cost_fn(total_profile, n));

  std::vector<double> scores(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    scores[k] = sev_score(classes.demand(k), total_profile, n, cost_fn);
    evaluations += 2 * n - 1;
  }
  return finish(Method::sev, scores, {sizes.begin(), sizes.end()}, total, evaluations);
}

AllocationResult sev_alloc(const DemandMatrix& demands, const ProfileCostFn& cost_fn,
                           std::optional<double> community_total) {
  const std::size_t n = demands.agents();
  require_two(n);
  std::vector<std::size_t> everyone(n);
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});
  const std::vector<double> total_profile = aggregate_demand(demands, everyone);

  std::size_t evaluations = 0;
  const double total = community_total ? *community_total : (++evaluations, cost_fn(total_profile, n));

  std::vector<double> scores(n);
  for (std::size_t a = 0; a < n; ++a) {
    scores[a] = sev_score(demands.row(a), total_profile, n, cost_fn);
    evaluations += 2 * n - 1;
  }
  return finish(Method::sev, scores, std::vector<std::size_t>(n, 1), total, evaluations);
}

}  // namespace commshare
