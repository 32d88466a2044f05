#include "commshare/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "commshare/error.hpp"
#include "commshare/parallel.hpp"
#include "commshare/random.hpp"

namespace commshare {

std::vector<double> l2_normalize(std::span<const double> series) {
  double sq = 0.0;
  for (double v : series) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorKind::ZeroVector, "cannot normalise a zero vector");
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = series[i] / norm;
  return out;
}

bool is_retained_winter_weekday(std::chrono::year_month_day date) {
  using namespace std::chrono;
  const unsigned m = static_cast<unsigned>(date.month());
  const unsigned d = static_cast<unsigned>(date.day());
  if (m != 1 && m != 2 && m != 11 && m != 12) return false;
  if (m == 1 && d <= 6) return false;
  if (m == 12 && d >= 22) return false;
  const weekday wd{sys_days{date}};
  return wd == Monday || wd == Tuesday || wd == Wednesday || wd == Thursday;
}

DailyProfiles filter_winter_weekdays(std::span<const double> series, std::chrono::year_month_day start) {
  if (!start.ok()) throw Error(ErrorKind::CalendarMismatch, "invalid start date");
  if (series.size() % kStepsPerDay != 0)
    throw Error(ErrorKind::CalendarMismatch,
                "series of " + std::to_string(series.size()) + " steps is not a whole number of days");
  DailyProfiles out;
  const std::chrono::sys_days first{start};
  const std::size_t days = series.size() / kStepsPerDay;
  for (std::size_t d = 0; d < days; ++d) {
    const std::chrono::year_month_day date{first + std::chrono::days{static_cast<int>(d)}};
    if (!is_retained_winter_weekday(date)) continue;
    const auto begin = series.begin() + static_cast<std::ptrdiff_t>(d * kStepsPerDay);
    out.days.push_back(date);
    out.rows.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(kStepsPerDay));
  }
  return out;
}

std::vector<double> daily_mean_profile(const DailyProfiles& profiles) {
  if (profiles.rows.empty()) throw Error(ErrorKind::CalendarMismatch, "no days left to average");
  std::vector<double> mean(kStepsPerDay, 0.0);
  for (const auto& row : profiles.rows) {
    for (std::size_t s = 0; s < kStepsPerDay; ++s) mean[s] += row[s];
  }
  for (double& v : mean) v /= static_cast<double>(profiles.rows.size());
  return mean;
}

RawDemand filter_by_coverage(const RawDemand& raw, double min_coverage) {
  if (!(min_coverage >= 0.0 && min_coverage <= 1.0))
    throw Error(ErrorKind::InvalidSpec, "coverage threshold must lie in [0, 1]");
  const auto coverage = raw.coverage();
  RawDemand kept;
  for (std::size_t a = 0; a < raw.rows.size(); ++a) {
    if (coverage[a] < min_coverage) continue;
    kept.agent_ids.push_back(raw.agent_ids[a]);
    kept.rows.push_back(raw.rows[a]);
  }
  return kept;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Nearest centroid per row (lowest index on ties) and the summed squared distance.
double assign(const std::vector<std::vector<double>>& rows, const std::vector<std::vector<double>>& centroids,
              std::vector<std::size_t>& assignments) {
  std::vector<double> dist(rows.size());
  parallel_for(rows.size(), [&](std::size_t r) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(rows[r], centroids[c]);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    assignments[r] = best_c;
    dist[r] = best;
  });
  double inertia = 0.0;
  for (double d : dist) inertia += d;
  return inertia;
}

std::vector<std::vector<double>> kmeans_plus_plus(const std::vector<std::vector<double>>& rows, std::size_t k,
                                                  RandomStream& rng) {
  const std::size_t n = rows.size();
  std::vector<std::vector<double>> centroids;
  std::vector<bool> chosen(n, false);
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  centroids.push_back(rows[first]);
  chosen[first] = true;

  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      d2[r] = std::min(d2[r], squared_distance(rows[r], centroids.back()));
      total += d2[r];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double cumulative = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        cumulative += d2[r];
        if (d2[r] > 0.0 && u < cumulative) {
          pick = r;
          break;
        }
      }
      if (pick == n) {
        for (std::size_t r = n; r-- > 0;) {
          if (d2[r] > 0.0) {
            pick = r;
            break;
          }
        }
      }
    } else {
      // Every row coincides with a centroid already: take an unused row.
      std::vector<std::size_t> unused;
      for (std::size_t r = 0; r < n; ++r) {
        if (!chosen[r]) unused.push_back(r);
      }
      pick = unused[static_cast<std::size_t>(rng.below(unused.size()))];
    }
    chosen[pick] = true;
    centroids.push_back(rows[pick]);
  }
  return centroids;
}

}  // namespace

ClusterModel kmeans(const std::vector<std::vector<double>>& rows, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters, double tol) {
  if (k == 0) throw Error(ErrorKind::InvalidSpec, "k must be >= 1");
  if (k > rows.size())
    throw Error(ErrorKind::KTooLarge, "k = " + std::to_string(k) + " exceeds " + std::to_string(rows.size()) + " rows");
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorKind::LengthMismatch, "rows differ in length");
  }

  RandomStream rng(seed, 0);
  ClusterModel model;
  model.k = k;
  model.centroids = kmeans_plus_plus(rows, k, rng);
  model.assignments.assign(rows.size(), 0);

  for (std::size_t it = 0; it < max_iters; ++it) {
    model.inertia_history.push_back(assign(rows, model.centroids, model.assignments));

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto& s = sums[model.assignments[r]];
      for (std::size_t i = 0; i < dim; ++i) s[i] += rows[r][i];
      ++counts[model.assignments[r]];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
      shift = std::max(shift, std::sqrt(squared_distance(sums[c], model.centroids[c])));
      model.centroids[c] = std::move(sums[c]);
    }
    ++model.iterations;
    if (shift <= tol) break;
  }
  model.inertia_history.push_back(assign(rows, model.centroids, model.assignments));
  model.inertia = model.inertia_history.back();
  return model;
}

std::vector<std::vector<double>> synthesize_class_profiles(const std::vector<std::vector<double>>& shapes,
                                                           std::span<const std::size_t> class_sizes,
                                                           double reference_total, double timestep_hours) {
  if (shapes.size() != class_sizes.size() || shapes.empty())
    throw Error(ErrorKind::InvalidSpec, "one shape per class is required");
  if (!(timestep_hours > 0.0)) throw Error(ErrorKind::InvalidSpec, "timestep must be positive");
  double denom = 0.0;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    if (class_sizes[k] == 0) throw Error(ErrorKind::InvalidSpec, "class sizes must be >= 1");
    double s = 0.0;
    for (double v : shapes[k]) {
      if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::NegativeDemand, "shapes must be finite and >= 0");
      s += v;
    }
    denom += static_cast<double>(class_sizes[k]) * s;
  }
  denom *= timestep_hours;
  if (!(denom > 0.0)) throw Error(ErrorKind::ZeroDenominator, "class shapes carry no energy");

  const double scale = reference_total / denom;
  std::vector<std::vector<double>> out = shapes;
  for (auto& row : out) {
    for (double& v : row) v *= scale;
  }
  return out;
}

}  // namespace commshare
