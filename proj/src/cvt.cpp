#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "detail/working.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill {

void CvtConfig::validate() const {
  if (niter < 1) throw std::invalid_argument("CVT needs niter >= 1");
  if (ppi < 1) throw std::invalid_argument("CVT needs ppi >= 1");
  if (!(alpha2 > 0.0) || !(beta2 > 0.0)) {
    throw std::invalid_argument("CVT needs alpha2 > 0 and beta2 > 0");
  }
  if (std::abs(alpha1 + alpha2 - 1.0) > 1e-12 || std::abs(beta1 + beta2 - 1.0) > 1e-12) {
    throw std::invalid_argument("CVT needs alpha1 + alpha2 == 1 and beta1 + beta2 == 1");
  }
  if (!(convergence_tol >= 0.0)) throw std::invalid_argument("CVT tolerance must be >= 0");
}

SampleSet cvt_sampling(const Domain& domain, std::size_t n, Rng& rng, const CvtConfig& config,
                       CvtStats* stats) {
  if (n < 1) throw std::invalid_argument("CVT needs n >= 1");
  config.validate();
  const std::size_t dim = domain.dim();
  const detail::Frame frame(domain);
  detail::CandidateDrawer drawer(domain, frame, detail::Box::unit(dim));

  CvtStats local;
  local.ppi_below_n = config.ppi < n;

  // Initial generators follow the density as well, which helps convergence.
  std::vector<double> gen(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    drawer.draw_from_density(rng, std::span<double>(gen).subspan(i * dim, dim));
  }
  std::vector<double> m(n, 1.0);

  std::vector<double> probe(dim);
  std::vector<double> sums(n * dim);
  std::vector<std::size_t> counts(n);
  std::vector<double> updated(dim), x(dim);
  for (std::size_t iter = 0; iter < config.niter; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t k = 0; k < config.ppi; ++k) {
      drawer.draw_from_density(rng, probe);
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double s = squared_distance(probe, std::span<const double>(gen).subspan(i * dim, dim));
        if (s < best) {
          best = s;
          nearest = i;
        }
      }
      for (std::size_t j = 0; j < dim; ++j) sums[nearest * dim + j] += probe[j];
      ++counts[nearest];
    }

    double max_shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] == 0) continue;
      const double old_weight = config.alpha1 * m[i] + config.beta1;
      const double new_weight = config.alpha2 * m[i] + config.beta2;
      for (std::size_t j = 0; j < dim; ++j) {
        const double mean = sums[i * dim + j] / static_cast<double>(counts[i]);
        updated[j] = (old_weight * gen[i * dim + j] + new_weight * mean) / (m[i] + 1.0);
      }
      // In a non-convex viable region the centroid can fall outside it; such
      // a generator keeps its previous position.
      frame.to_domain(updated, x);
      if (domain.has_viability() && !domain.admits(x)) continue;
      auto g = std::span<double>(gen).subspan(i * dim, dim);
      max_shift = std::max(max_shift, std::sqrt(squared_distance(updated, g)));
      std::copy(updated.begin(), updated.end(), g.begin());
      m[i] += 1.0;
    }
    local.iterations = iter + 1;
    local.last_max_shift = max_shift;
    if (max_shift < config.convergence_tol) break;
  }
  if (stats) *stats = local;
  return detail::assemble(domain, frame, nullptr, gen);
}

}  // namespace spacefill
