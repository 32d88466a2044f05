#include "commshare/hypergeometric.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "commshare/error.hpp"

namespace commshare {

LogBinomial::LogBinomial(std::size_t max_n) : log_factorial_(max_n + 1) {
  for (std::size_t n = 0; n <= max_n; ++n) log_factorial_[n] = std::lgamma(static_cast<double>(n) + 1.0);
}

double LogBinomial::operator()(std::size_t n, std::size_t k) const {
  if (k > n || n > max_n()) throw Error(ErrorKind::InvalidCounts, "C(" + std::to_string(n) + ", " + std::to_string(k) + ")");
  return log_factorial_[n] - log_factorial_[k] - log_factorial_[n - k];
}

double multivariate_hypergeometric_pmf(std::span<const std::size_t> draws,
                                       std::span<const std::size_t> class_sizes, std::size_t population,
                                       std::size_t draw_count) {
  if (draws.size() != class_sizes.size() || draws.empty())
    throw Error(ErrorKind::InvalidCounts, "draw and class vectors differ in length");
  if (std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0}) != population)
    throw Error(ErrorKind::InvalidCounts, "class sizes do not sum to the population");
  if (std::accumulate(draws.begin(), draws.end(), std::size_t{0}) != draw_count)
    throw Error(ErrorKind::InvalidCounts, "draws do not sum to the draw count");
  for (std::size_t k = 0; k < draws.size(); ++k) {
    if (draws[k] > class_sizes[k]) throw Error(ErrorKind::InvalidCounts, "more draws than class members");
  }
  const LogBinomial log_binom(population);
  double log_p = -log_binom(population, draw_count);
  for (std::size_t k = 0; k < draws.size(); ++k) log_p += log_binom(class_sizes[k], draws[k]);
  return std::exp(log_p);
}

}  // namespace commshare
