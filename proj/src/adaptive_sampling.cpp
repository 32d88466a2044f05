#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "allocation_detail.hpp"
#include "commshare/allocation.hpp"
#include "commshare/error.hpp"
#include "commshare/parallel.hpp"
#include "commshare/random.hpp"

namespace commshare {

double exploration_rate(double m, double samples_per_agent, double beta, double gamma) {
  const double bm = beta * samples_per_agent;
  return 1.0 + 1.0 / (1.0 + std::exp(gamma / beta)) - 1.0 / (1.0 + std::exp(-(m - gamma * samples_per_agent) / bm));
}

std::vector<double> stratum_probabilities(std::span<const double> sigma, double exploration) {
  std::vector<double> pi(sigma.size(), 0.0);
  if (sigma.empty()) return pi;
  const double uniform = 1.0 / static_cast<double>(sigma.size());
  double total = 0.0;
  for (double s : sigma) total += s;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double exploit = total > 0.0 ? sigma[j] / total : uniform;
    pi[j] = exploration * uniform + (1.0 - exploration) * exploit;
  }
  return pi;
}

namespace {

struct StratumStats {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  double sigma = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
    if (count > 1) sigma = std::sqrt(m2 / static_cast<double>(count - 1));
  }
};

struct AgentRun {
  double score = 0.0;
  std::vector<std::size_t> visits;
  double max_probability_error = 0.0;
  std::size_t samples = 0;
  std::size_t evaluations = 0;
};

// One agent's adaptive run. marginal(j, rng) returns the marginal
// contribution against a uniformly drawn size-j subcoalition of the others
// and adds the evaluations it spent to *evals.
template <typename Marginal>
AgentRun run_agent(std::size_t n, const SamplerParams& params, RandomStream& rng, Marginal&& marginal) {
  AgentRun run;
  run.visits.assign(n, 0);
  std::vector<StratumStats> stats(n);
  for (auto& s : stats) s.sigma = params.sigma_init;

  const auto draw = [&](std::size_t j) {
    stats[j].add(marginal(j, rng, run.evaluations));
    ++run.visits[j];
    ++run.samples;
  };

  // The smallest and largest strata hold a single coalition each.
  draw(0);
  if (n > 1) draw(n - 1);

  if (n > 2) {
    const std::size_t eligible = n - 2;
    std::vector<double> sigma(eligible);
    const auto m_total = static_cast<double>(params.samples_per_agent);
    for (std::size_t m = run.samples + 1; m <= params.samples_per_agent; ++m) {
      for (std::size_t e = 0; e < eligible; ++e) sigma[e] = stats[e + 1].sigma;
      const double eps = exploration_rate(static_cast<double>(m), m_total, params.beta, params.gamma);
      const auto pi = stratum_probabilities(sigma, eps);

      double sum = 0.0;
      for (double p : pi) sum += p;
      run.max_probability_error = std::max(run.max_probability_error, std::abs(sum - 1.0));

      const double u = rng.uniform() * sum;
      std::size_t pick = eligible - 1;
      double cumulative = 0.0;
      for (std::size_t e = 0; e < eligible; ++e) {
        cumulative += pi[e];
        if (u < cumulative) {
          pick = e;
          break;
        }
      }
      draw(pick + 1);
    }
  }

  double sum = 0.0;
  for (const auto& s : stats) sum += s.mean;
  run.score = sum / static_cast<double>(n);
  return run;
}

// Moves a uniform size-j subset of pool into pool[0..j) (partial Fisher-Yates).
void shuffle_prefix(std::vector<std::size_t>& pool, std::size_t j, RandomStream& rng) {
  for (std::size_t i = 0; i < j; ++i) {
    const std::size_t pick = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[pick]);
  }
}

void check_params(std::size_t n, const SamplerParams& params) {
  if (params.samples_per_agent < n)
    throw Error(ErrorKind::InsufficientSamples, std::to_string(params.samples_per_agent) +
                                                    " samples per agent cannot cover " + std::to_string(n) +
                                                    " strata");
  if (!(params.beta > 0.0) || !(params.gamma >= 0.0) || !(params.sigma_init > 0.0))
    throw Error(ErrorKind::InvalidSpec, "sampler needs beta > 0, gamma >= 0 and a positive initial spread");
}

AllocationResult assemble(std::vector<AgentRun>& runs, std::vector<std::size_t> sizes, double total,
                          const SamplerParams& params) {
  std::vector<double> scores(runs.size());
  SamplerDiagnostics diag;
  std::size_t evaluations = 0;
  for (std::size_t a = 0; a < runs.size(); ++a) {
    scores[a] = runs[a].score;
    diag.max_probability_error = std::max(diag.max_probability_error, runs[a].max_probability_error);
    diag.samples_drawn += runs[a].samples;
    evaluations += runs[a].evaluations;
    diag.visits.push_back(std::move(runs[a].visits));
  }

  AllocationResult result;
  result.method = Method::adaptive_sampling;
  result.costs = detail::normalize_to_total(scores, sizes, total);
  result.class_sizes = std::move(sizes);
  result.community_total = total;
  result.seed = params.seed;
  result.samples_per_agent = params.samples_per_agent;
  result.evaluations = evaluations;
  result.sampler = std::move(diag);
  return result;
}

}  // namespace

AllocationResult adaptive_sampling_alloc(const CoalitionCostTable& table, const ClassStructure& classes,
                                         const SamplerParams& params) {
  const auto sizes = classes.sizes();
  if (!std::equal(sizes.begin(), sizes.end(), table.class_sizes().begin(), table.class_sizes().end()))
    throw Error(ErrorKind::IncompleteTable, "cost table shape does not match the class structure");
  const std::size_t n = classes.total();
  check_params(n, params);
  const std::size_t k_count = sizes.size();

  std::vector<AgentRun> runs(k_count);
  parallel_for(k_count, [&](std::size_t k) {
    // Class labels of the other N-1 agents.
    std::vector<std::size_t> pool;
    pool.reserve(n - 1);
    for (std::size_t q = 0; q < k_count; ++q) pool.insert(pool.end(), sizes[q] - (q == k ? 1 : 0), q);

    std::vector<std::size_t> counts(k_count);
    std::vector<std::size_t> with_k(k_count);
    RandomStream rng(params.seed, k);
    runs[k] = run_agent(n, params, rng, [&](std::size_t j, RandomStream& r, std::size_t& evals) {
      shuffle_prefix(pool, j, r);
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < j; ++i) ++counts[pool[i]];
      with_k = counts;
      ++with_k[k];
      ++evals;
      return table.at(with_k) - table.at(counts);
    });
  });
  return assemble(runs, {sizes.begin(), sizes.end()}, table.grand_coalition(), params);
}

AllocationResult adaptive_sampling_alloc(std::size_t agents, const SetCostFn& cost_fn, const SamplerParams& params) {
  if (agents == 0) throw Error(ErrorKind::InvalidSpec, "no agents");
  check_params(agents, params);

  std::vector<std::size_t> everyone(agents);
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});
  const double total = cost_fn(everyone);

  std::vector<AgentRun> runs(agents);
  parallel_for(agents, [&](std::size_t a) {
    std::vector<std::size_t> pool;
    pool.reserve(agents - 1);
    for (std::size_t b = 0; b < agents; ++b) {
      if (b != a) pool.push_back(b);
    }
    std::vector<std::size_t> members;
    RandomStream rng(params.seed, a);
    runs[a] = run_agent(agents, params, rng, [&](std::size_t j, RandomStream& r, std::size_t& evals) {
      shuffle_prefix(pool, j, r);
      members.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(j));
      std::sort(members.begin(), members.end());
      double without = 0.0;
      if (j > 0) {
        without = cost_fn(members);
        ++evals;
      }
      members.insert(std::lower_bound(members.begin(), members.end(), a), a);
      ++evals;
      return cost_fn(members) - without;
    });
  });
  AllocationResult result = assemble(runs, std::vector<std::size_t>(agents, 1), total, params);
  result.evaluations += 1;
  return result;
}

}  // namespace commshare
