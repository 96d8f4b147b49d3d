#include <limits>
#include <stdexcept>

#include "detail/working.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill {

using detail::Box;
using detail::CandidateDrawer;
using detail::FpKind;
using detail::FpPlan;
using detail::Frame;

FpConfig FpConfig::greedy(std::size_t scale) {
  FpConfig c;
  c.scale = scale;
  return c;
}

FpConfig FpConfig::best_candidate(std::size_t n_cand) {
  FpConfig c;
  c.n_cand_fixed = n_cand;
  return c;
}

FpConfig FpConfig::best_candidate_scaled(std::size_t scale, std::size_t max_cand) {
  FpConfig c;
  c.scale = scale;
  c.max_cand = max_cand;
  return c;
}

FpConfig FpConfig::hybrid(std::size_t scale, std::size_t refresh_count) {
  FpConfig c;
  c.scale = scale;
  c.refresh_count = refresh_count;
  return c;
}

SampleSet random_sampling(const Domain& domain, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random sampling needs n >= 1");
  const Frame frame(domain);
  CandidateDrawer drawer(domain, frame, Box::unit(domain.dim()));
  std::vector<double> u(n * domain.dim());
  for (std::size_t i = 0; i < n; ++i) {
    drawer.draw(rng, std::span<double>(u).subspan(i * domain.dim(), domain.dim()));
  }
  return detail::assemble(domain, frame, nullptr, u);
}

SampleSet grid_sampling(const Domain& domain, const std::vector<std::size_t>& bins_per_dim,
                        GridMode mode, Rng& rng, std::size_t max_points) {
  const std::size_t dim = domain.dim();
  if (bins_per_dim.size() != dim) {
    throw std::invalid_argument("grid needs one bin count per dimension");
  }
  std::size_t total = 1;
  for (std::size_t b : bins_per_dim) {
    if (b < 1) throw std::invalid_argument("grid bin counts must be >= 1");
    if (total > max_points / b) {
      throw std::invalid_argument("grid has more than " + std::to_string(max_points) +
                                  " cells");
    }
    total *= b;
  }

  const Frame frame(domain);
  std::vector<double> u;
  u.reserve(total * dim);
  std::vector<std::size_t> cell(dim, 0);
  std::vector<double> p(dim), x(dim);
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double bins = static_cast<double>(bins_per_dim[k]);
      const double lo = static_cast<double>(cell[k]) / bins;
      const double hi = static_cast<double>(cell[k] + 1) / bins;
      p[k] = mode == GridMode::CellCenter ? (static_cast<double>(cell[k]) + 0.5) / bins
                                          : rng.uniform(lo, hi);
    }
    frame.to_domain(p, x);
    if (domain.admits(x)) u.insert(u.end(), p.begin(), p.end());
    // Odometer with the last dimension varying fastest.
    for (std::size_t k = dim; k-- > 0;) {
      if (++cell[k] < bins_per_dim[k]) break;
      cell[k] = 0;
    }
  }
  return detail::assemble(domain, frame, nullptr, u);
}

namespace {

SampleSet run_fp(const Domain& domain, const SampleSet* existing, std::size_t n, Rng& rng,
                 const FpConfig& config, FpKind kind, SelectionTrace* trace) {
  if (n < 1 && existing == nullptr) throw std::invalid_argument("sampler needs n >= 1");
  const Frame frame(domain);
  CandidateDrawer drawer(domain, frame, Box::unit(domain.dim()));
  std::vector<double> fixed;
  if (existing != nullptr) fixed = frame.to_frame_all(existing->coords());
  const auto fresh = detail::run_farthest(drawer, fixed, FpPlan{kind, n, config}, rng, trace);
  return detail::assemble(domain, frame, existing, fresh);
}

}  // namespace

SampleSet greedy_fp(const Domain& domain, std::size_t n, Rng& rng, const FpConfig& config,
                    SelectionTrace* trace) {
  return run_fp(domain, nullptr, n, rng, config, FpKind::Greedy, trace);
}

SampleSet greedy_fp(const SampleSet& existing, std::size_t n, Rng& rng, const FpConfig& config,
                    SelectionTrace* trace) {
  return run_fp(existing.domain(), &existing, n, rng, config, FpKind::Greedy, trace);
}

SampleSet best_candidate(const Domain& domain, std::size_t n, Rng& rng, const FpConfig& config,
                         SelectionTrace* trace) {
  return run_fp(domain, nullptr, n, rng, config, FpKind::BestCandidate, trace);
}

SampleSet best_candidate(const SampleSet& existing, std::size_t n, Rng& rng,
                         const FpConfig& config, SelectionTrace* trace) {
  return run_fp(existing.domain(), &existing, n, rng, config, FpKind::BestCandidate, trace);
}

SampleSet hybrid_bc_fp(const Domain& domain, std::size_t n, Rng& rng, const FpConfig& config,
                       SelectionTrace* trace) {
  return run_fp(domain, nullptr, n, rng, config, FpKind::Hybrid, trace);
}

SampleSet hybrid_bc_fp(const SampleSet& existing, std::size_t n, Rng& rng,
                       const FpConfig& config, SelectionTrace* trace) {
  return run_fp(existing.domain(), &existing, n, rng, config, FpKind::Hybrid, trace);
}

}  // namespace spacefill
