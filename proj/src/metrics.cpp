#include "spacefill/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spacefill {

NnStats nn_stats(const SampleSet& set) {
  const std::vector<double> nn = nearest_neighbor_distances(set);
  const auto [lo, hi] = std::minmax_element(nn.begin(), nn.end());
  const double sum = std::accumulate(nn.begin(), nn.end(), 0.0);
  return {*lo, sum / static_cast<double>(nn.size()), *hi};
}

double phi_p(const SampleSet& set, int p) {
  if (p < 1) throw std::invalid_argument("phi_p needs a positive exponent");
  const std::size_t n = set.size();
  if (n < 2) throw std::invalid_argument("phi_p needs >= 2 points");
  const std::size_t dim = set.dim();
  const std::vector<double> u = unit_coords(set);

  // log of each term (1/d)^p is -(p/2) * log(d^2).
  const double half_p = 0.5 * static_cast<double>(p);
  std::vector<double> logs;
  logs.reserve(n * (n - 1) / 2);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    PointView pi(u.data() + i * dim, dim);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sq = squared_distance(pi, PointView(u.data() + j * dim, dim));
      if (sq == 0.0) throw DuplicatePoints(i, j);
      const double t = -half_p * std::log(sq);
      logs.push_back(t);
      top = std::max(top, t);
    }
  }
  double sum = 0.0;
  for (double t : logs) sum += std::exp(t - top);
  return std::exp((top + std::log(sum)) / static_cast<double>(p));
}

double cl2_discrepancy(const SampleSet& set) {
  const std::size_t n = set.size();
  if (n < 1) throw std::invalid_argument("CL2 needs at least one point");
  const std::size_t dim = set.dim();
  const std::vector<double>& x = set.coords();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
      throw std::invalid_argument("CL2 needs coordinates in [0,1]; point " +
                                  std::to_string(i / dim) + " is outside");
    }
  }
  std::vector<double> centered(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) centered[i] = std::abs(x[i] - 0.5);

  const double first = std::pow(13.0 / 12.0, static_cast<double>(dim));

  double single = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double prod = 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double a = centered[i * dim + k];
      prod *= 1.0 + 0.5 * (a - a * a);
    }
    single += prod;
  }

  // The double sum runs over all ordered pairs, diagonal included.
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < dim; ++k) {
        prod *= 1.0 + 0.5 * (centered[i * dim + k] + centered[j * dim + k] -
                             std::abs(x[i * dim + k] - x[j * dim + k]));
      }
      pairs += prod;
    }
  }
  const double nd = static_cast<double>(n);
  const double value = first - (2.0 / nd) * single + pairs / (nd * nd);
  return std::sqrt(std::max(value, 0.0));
}

QualityReport quality_report(const SampleSet& set, int p) {
  const NnStats nn = nn_stats(set);
  QualityReport r;
  r.nn_min = nn.min;
  r.nn_avg = nn.avg;
  r.nn_max = nn.max;
  r.p = p;
  r.phi_p = phi_p(set, p);
  r.cl2 = cl2_discrepancy(set);
  r.n = set.size();
  r.d = set.dim();
  return r;
}

}  // namespace spacefill
