#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "commshare/error.hpp"

namespace commshare::detail {

// Rescales raw per-class scores so that sum_k N_k * cost_k equals total.
inline std::vector<double> normalize_to_total(std::span<const double> raw, std::span<const std::size_t> sizes,
                                              double total) {
  double denom = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) denom += static_cast<double>(sizes[k]) * raw[k];
  std::vector<double> out(raw.size(), 0.0);
  if (denom == 0.0) {
    if (total == 0.0) return out;
    throw Error(ErrorKind::DegenerateNormalizer, "scores sum to zero but the community cost does not");
  }
  for (std::size_t k = 0; k < raw.size(); ++k) out[k] = total * raw[k] / denom;
  return out;
}

}  // namespace commshare::detail
