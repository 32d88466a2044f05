#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace commshare {

/// log C(n, k) from a precomputed log-factorial table. Built once, then
/// read-only and safe to share across threads.
class LogBinomial {
 public:
  explicit LogBinomial(std::size_t max_n);

  double operator()(std::size_t n, std::size_t k) const;
  std::size_t max_n() const noexcept { return log_factorial_.size() - 1; }

 private:
  std::vector<double> log_factorial_;
};

/// Probability that a uniform draw of `draw_count` members from a population
/// of `population` split into classes of `class_sizes` contains exactly
/// `draws[k]` members of class k: prod C(N_k, n_k) / C(N, n), evaluated in
/// log space.
double multivariate_hypergeometric_pmf(std::span<const std::size_t> draws,
                                       std::span<const std::size_t> class_sizes, std::size_t population,
                                       std::size_t draw_count);

}  // namespace commshare
