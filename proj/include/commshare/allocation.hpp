#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commshare/cost.hpp"
#include "commshare/timeseries.hpp"

namespace commshare {

// Characteristic functions in the three shapes the allocation methods need.
// All must return 0 for the empty coalition and be safe to call concurrently.

// Unique-agent game: sorted member indices -> annual cost.
using SetCostFn = std::function<double(std::span<const std::size_t> members)>;
// K-class game: per-class member counts -> annual cost.
using CountCostFn = std::function<double(std::span<const std::size_t> counts)>;
// Arbitrary aggregate profile with a coalition size -> annual cost.
using ProfileCostFn = std::function<double(std::span<const double> demand_kw, std::size_t coalition_size)>;

/// A community of K classes whose members share one demand profile per class.
/// Classes are stored largest first; original_index() maps back to the order
/// given at construction (stable for equal sizes).
class ClassStructure {
 public:
  ClassStructure(std::vector<std::size_t> sizes, std::vector<std::vector<double>> demands = {},
                 std::vector<std::string> names = {});

  std::size_t classes() const noexcept { return sizes_.size(); }
  std::size_t total() const noexcept { return total_; }
  std::size_t size(std::size_t k) const { return sizes_.at(k); }
  std::span<const std::size_t> sizes() const noexcept { return sizes_; }
  bool has_demands() const noexcept { return !demands_.empty(); }
  std::span<const double> demand(std::size_t k) const;
  const std::string& name(std::size_t k) const { return names_.at(k); }
  std::size_t original_index(std::size_t k) const { return original_index_.at(k); }

  // sum_k counts[k] * d_k(t)
  std::vector<double> aggregate(std::span<const std::size_t> counts) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<double>> demands_;
  std::vector<std::string> names_;
  std::vector<std::size_t> original_index_;
  std::size_t total_ = 0;
};

/// Dense K-dimensional table of coalition costs indexed by class counts
/// (n_1, ..., n_K), each n_k in [0, N_k].
class CoalitionCostTable {
 public:
  explicit CoalitionCostTable(std::vector<std::size_t> class_sizes);

  std::size_t cells() const noexcept { return values_.size(); }
  std::span<const std::size_t> class_sizes() const noexcept { return class_sizes_; }
  std::size_t index(std::span<const std::size_t> counts) const;
  std::vector<std::size_t> counts_of(std::size_t index) const;

  double at(std::span<const std::size_t> counts) const { return values_[index(counts)]; }
  double at_index(std::size_t i) const { return values_[i]; }
  void set_index(std::size_t i, double value) { values_[i] = value; }
  double grand_coalition() const { return values_.back(); }
  // Cells never written hold NaN.
  bool complete() const;

  std::size_t eval_count = 0;

 private:
  std::vector<std::size_t> class_sizes_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

enum class Method { exact_naive, exact_kclass, marginal_contribution, sev, adaptive_sampling };

std::string_view to_string(Method method);

struct SamplerParams {
  std::size_t samples_per_agent = 1000;
  std::uint64_t seed = 0;
  double beta = 0.075;
  double gamma = 0.2;
  double sigma_init = 1e4;
};

struct SamplerDiagnostics {
  // visits[a][j]: samples agent (or class representative) a drew from stratum j.
  std::vector<std::vector<std::size_t>> visits;
  // Largest |sum_j pi_j - 1| over every draw.
  double max_probability_error = 0.0;
  std::size_t samples_drawn = 0;
};

/// Per-class (or per-agent, all sizes 1) cost in GBP per agent.
struct AllocationResult {
  Method method = Method::exact_kclass;
  std::vector<double> costs;
  std::vector<std::size_t> class_sizes;
  double community_total = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples_per_agent;
  // Characteristic-function evaluations made by this method itself (a
  // shared cost table is accounted for separately).
  std::size_t evaluations = 0;
  std::optional<SamplerDiagnostics> sampler;

  // |sum_k N_k cost_k - c(N)| / |c(N)| (absolute when c(N) = 0).
  double efficiency_residual() const;
};

/// Cost of every class-count vector. Cells are evaluated in parallel and
/// eval_count records the calls made, one per cell.
CoalitionCostTable build_cost_table(const ClassStructure& classes, const CountCostFn& cost_fn);

/// Exact Shapley values for a K-class community from its cost table: the
/// stratified marginal contributions of classes 2..K are weighted by the
/// multivariate hypergeometric probability of each count vector among the
/// other N-1 agents, and class 1 takes the remaining cost.
AllocationResult exact_shapley_kclass(const CoalitionCostTable& table, const ClassStructure& classes);

/// Exact Shapley values by enumerating every subset (2^N evaluations).
/// The last agent is assigned the remainder.
AllocationResult exact_shapley_naive(std::size_t agents, const SetCostFn& cost_fn, std::size_t max_agents = 12);

/// Normalised last marginal contribution, c(N) - c(N \ {i}), once per class.
AllocationResult marginal_contribution_alloc(const ClassStructure& classes, const CountCostFn& cost_fn);
AllocationResult marginal_contribution_alloc(const CoalitionCostTable& table, const ClassStructure& classes);
AllocationResult marginal_contribution_alloc(std::size_t agents, const SetCostFn& cost_fn);

/// Stratified expected values: per stratum j, the marginal contribution of
/// the agent to j fictitious agents carrying the mean profile of the others.
/// community_total, when given, is used for normalisation instead of one
/// more evaluation of the grand coalition.
AllocationResult sev_alloc(const ClassStructure& classes, const ProfileCostFn& cost_fn,
                           std::optional<double> community_total = std::nullopt);
AllocationResult sev_alloc(const DemandMatrix& demands, const ProfileCostFn& cost_fn,
                           std::optional<double> community_total = std::nullopt);

/// Adaptive stratified sampling. Strata 0 and N-1 are sampled once each; the
/// remaining samples pick strata by a mix of uniform exploration and the
/// estimated per-stratum spread, with the mix governed by a double-sigmoid
/// schedule. Each agent (class representative) draws from its own stream.
AllocationResult adaptive_sampling_alloc(const CoalitionCostTable& table, const ClassStructure& classes,
                                         const SamplerParams& params);
AllocationResult adaptive_sampling_alloc(std::size_t agents, const SetCostFn& cost_fn,
                                         const SamplerParams& params);

// Exploration weight for sample m of M.
double exploration_rate(double m, double samples_per_agent, double beta, double gamma);

// Stratum selection probabilities over the given spreads.
std::vector<double> stratum_probabilities(std::span<const double> sigma, double exploration);

double relative_difference(double estimate, double truth);
double average_relative_difference(std::span<const double> per_class_rd, std::span<const std::size_t> class_sizes);

// Adaptors from the energy cost model to the game shapes above.
CountCostFn class_game(const CoalitionCostModel& model, const ClassStructure& classes);
SetCostFn agent_game(const CoalitionCostModel& model, const DemandMatrix& demands);
ProfileCostFn profile_game(const CoalitionCostModel& model);

}  // namespace commshare
