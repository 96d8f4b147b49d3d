#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "detail/working.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill {

void PoissonConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("Poisson disk radius must be positive and finite");
  }
  if (ncand < 1) throw std::invalid_argument("Poisson disk needs ncand >= 1");
}

namespace {

/// Offset with r <= |o| <= 2r, by rejection from the [-2r, 2r]^d box.
void annulus_offset(Rng& rng, double r, std::span<double> o) {
  const double inner = r * r;
  const double outer = 4.0 * r * r;
  for (std::size_t attempt = 0; attempt < kRejectionCap; ++attempt) {
    double s = 0.0;
    for (double& v : o) {
      v = rng.uniform(-2.0 * r, 2.0 * r);
      s += v * v;
    }
    if (s >= inner && s <= outer) return;
  }
  throw SamplingError("annulus rejection sampling failed");
}

}  // namespace

SampleSet poisson_disk(const Domain& domain, const PoissonConfig& config, Rng& rng) {
  config.validate();
  const std::size_t dim = domain.dim();
  const double r = config.radius;
  const detail::Frame frame(domain);
  detail::CandidateDrawer drawer(domain, frame, detail::Box::unit(dim));
  const detail::Box unit = detail::Box::unit(dim);

  std::vector<double> samples(dim);
  drawer.draw(rng, samples);
  std::vector<std::size_t> active{0};

  std::vector<double> offset(dim), cand(dim), x(dim);
  while (!active.empty()) {
    const std::size_t slot = rng.index(active.size());
    const std::size_t center = active[slot];
    bool placed = false;
    for (std::size_t t = 0; t < config.ncand && !placed; ++t) {
      annulus_offset(rng, r, offset);
      for (std::size_t k = 0; k < dim; ++k) cand[k] = samples[center * dim + k] + offset[k];
      if (!unit.contains(cand)) continue;
      if (domain.has_viability()) {
        frame.to_domain(cand, x);
        for (std::size_t k = 0; k < dim; ++k) {
          x[k] = std::clamp(x[k], domain.lower()[k], domain.upper()[k]);
        }
        if (!domain.admits(x)) continue;
      }
      if (std::sqrt(detail::min_sq_to(cand, samples, dim)) < r) continue;
      active.push_back(samples.size() / dim);
      samples.insert(samples.end(), cand.begin(), cand.end());
      placed = true;
    }
    if (!placed) {
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(slot));
    }
  }
  return detail::assemble(domain, frame, nullptr, samples);
}

}  // namespace spacefill
