#include "detail/working.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spacefill::detail {

Frame::Frame(const Domain& reference) : lower_(reference.lower()), range_(reference.dim()) {
  for (std::size_t k = 0; k < reference.dim(); ++k) range_[k] = reference.range(k);
}

void Frame::to_domain(std::span<const double> u, std::span<double> x) const {
  for (std::size_t k = 0; k < lower_.size(); ++k) x[k] = lower_[k] + u[k] * range_[k];
}

void Frame::to_frame(std::span<const double> x, std::span<double> u) const {
  for (std::size_t k = 0; k < lower_.size(); ++k) u[k] = (x[k] - lower_[k]) / range_[k];
}

std::vector<double> Frame::to_frame_all(std::span<const double> coords) const {
  std::vector<double> out(coords.size());
  const std::size_t d = dim();
  for (std::size_t i = 0; i < coords.size(); i += d) {
    to_frame(coords.subspan(i, d), std::span<double>(out).subspan(i, d));
  }
  return out;
}

std::vector<double> Frame::to_domain_all(std::span<const double> coords) const {
  std::vector<double> out(coords.size());
  const std::size_t d = dim();
  for (std::size_t i = 0; i < coords.size(); i += d) {
    to_domain(coords.subspan(i, d), std::span<double>(out).subspan(i, d));
  }
  return out;
}

Box Box::unit(std::size_t dim) {
  return Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

bool Box::contains(std::span<const double> u) const {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (u[k] < lo[k] || u[k] > hi[k]) return false;
  }
  return true;
}

bool Box::interior_contains(std::span<const double> u) const {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(u[k] > lo[k] && u[k] < hi[k])) return false;
  }
  return true;
}

CandidateDrawer::CandidateDrawer(const Domain& domain, const Frame& frame, Box region,
                                 std::optional<Box> exclude)
    : domain_(domain),
      frame_(frame),
      region_(std::move(region)),
      exclude_(std::move(exclude)),
      scratch_(frame.dim()) {}

bool CandidateDrawer::accept(std::span<const double> u, std::span<double> x) {
  if (exclude_ && exclude_->interior_contains(u)) return false;
  frame_.to_domain(u, x);
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = std::clamp(x[k], domain_.lower()[k], domain_.upper()[k]);
  }
  return !domain_.has_viability() || domain_.viability()(x);
}

double CandidateDrawer::draw(Rng& rng, std::span<double> u) {
  for (std::size_t attempt = 0; attempt < kRejectionCap; ++attempt) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = rng.uniform(region_.lo[k], region_.hi[k]);
    if (accept(u, scratch_)) {
      return domain_.has_density() ? domain_.density_at(scratch_) : 1.0;
    }
  }
  throw RegionTooSmall("region too small: " + std::to_string(kRejectionCap) +
                       " consecutive candidates rejected");
}

void CandidateDrawer::draw_from_density(Rng& rng, std::span<double> u) {
  if (!domain_.has_density()) {
    draw(rng, u);
    return;
  }
  const double rho_max = domain_.density_max();
  for (std::size_t attempt = 0; attempt < kRejectionCap; ++attempt) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = rng.uniform(region_.lo[k], region_.hi[k]);
    if (!accept(u, scratch_)) continue;
    const double rho = domain_.density_at(scratch_);
    if (rng.uniform01() * rho_max < rho) return;
  }
  throw SamplingError("density rejection sampling accepted nothing in " +
                      std::to_string(kRejectionCap) + " consecutive draws");
}

double min_sq_to(std::span<const double> p, std::span<const double> points, std::size_t dim) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); i += dim) {
    const double s = squared_distance(p, points.subspan(i, dim));
    if (s < best) best = s;
  }
  return best;
}

double min_sq_to_periodic(std::span<const double> p, std::span<const double> points,
                          std::size_t dim) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); i += dim) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double a = std::abs(p[k] - points[i + k]);
      a = std::min(a, 1.0 - a);
      s += a * a;
    }
    if (s < best) best = s;
  }
  return best;
}

std::size_t weighted_pick(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) throw std::invalid_argument("weighted_pick needs candidates");
  const double wmax = *std::max_element(weights.begin(), weights.end());
  if (!(wmax > 0.0)) throw SamplingError("all candidate densities are zero");
  for (std::size_t c = 0; c < weights.size(); ++c) {
    if (rng.uniform01() * wmax < weights[c]) return c;
  }
  // Unreachable: the first maximum-weight candidate is always accepted.
  return static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) -
                                  weights.begin());
}

namespace {

/// Candidate pool with cached min squared distance to everything fixed or
/// selected so far. Entries are kept in draw order so that the lowest-index
/// tie-break is stable.
class Pool {
 public:
  explicit Pool(std::size_t dim, CandidateMetric metric = CandidateMetric::Euclidean)
      : dim_(dim), periodic_(metric == CandidateMetric::Periodic) {}

  std::size_t size() const { return w_.size(); }
  bool weighted() const { return weighted_; }

  void clear() {
    u_.clear();
    w_.clear();
    minsq_.clear();
    weighted_ = false;
  }

  void fill(CandidateDrawer& drawer, Rng& rng, std::size_t count) {
    clear();
    u_.resize(count * dim_);
    w_.resize(count);
    minsq_.assign(count, std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < count; ++c) {
      w_[c] = drawer.draw(rng, std::span<double>(u_).subspan(c * dim_, dim_));
    }
    weighted_ = drawer.domain().has_density();
  }

  void assign(std::span<const double> u, std::span<const double> w) {
    u_.assign(u.begin(), u.end());
    const std::size_t count = u.size() / dim_;
    if (w.empty()) {
      w_.assign(count, 1.0);
      weighted_ = false;
    } else {
      w_.assign(w.begin(), w.end());
      weighted_ = true;
    }
    minsq_.assign(count, std::numeric_limits<double>::infinity());
  }

  void measure_against(std::span<const double> points) {
    for (std::size_t c = 0; c < size(); ++c) {
      const double s = periodic_ ? min_sq_to_periodic(point(c), points, dim_)
                                 : min_sq_to(point(c), points, dim_);
      minsq_[c] = std::min(minsq_[c], s);
    }
  }

  std::span<const double> point(std::size_t c) const {
    return std::span<const double>(u_).subspan(c * dim_, dim_);
  }

  /// Lowest-index argmax of weight^2 * minsq.
  std::size_t best() const {
    std::size_t arg = 0;
    double best_score = -1.0;
    for (std::size_t c = 0; c < size(); ++c) {
      const double score = weighted_ ? w_[c] * w_[c] * minsq_[c] : minsq_[c];
      if (score > best_score) {
        best_score = score;
        arg = c;
      }
    }
    return arg;
  }

  std::size_t random_pick(Rng& rng) const {
    return weighted_ ? weighted_pick(w_, rng) : rng.index(size());
  }

  void record(SelectionTrace* trace, std::size_t chosen, bool random) const {
    if (trace == nullptr) return;
    trace->steps.push_back(SelectionStep{u_, w_, chosen, random});
  }

  void erase(std::size_t c) {
    u_.erase(u_.begin() + static_cast<std::ptrdiff_t>(c * dim_),
             u_.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim_));
    w_.erase(w_.begin() + static_cast<std::ptrdiff_t>(c));
    minsq_.erase(minsq_.begin() + static_cast<std::ptrdiff_t>(c));
  }

 private:
  std::size_t dim_;
  bool periodic_;
  std::vector<double> u_;
  std::vector<double> w_;
  std::vector<double> minsq_;
  bool weighted_ = false;
};

std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw std::invalid_argument("candidate count overflows");
  }
  return a * b;
}

std::size_t bc_batch_size(const FpConfig& config, std::size_t sample_index) {
  if (config.n_cand_fixed) return *config.n_cand_fixed;
  std::size_t n = checked_product(config.scale, sample_index);
  if (config.max_cand) n = std::min(n, *config.max_cand);
  return std::max<std::size_t>(n, 1);
}

void validate_plan(const FpPlan& plan) {
  const FpConfig& c = plan.config;
  switch (plan.kind) {
    case FpKind::Greedy:
      if (c.scale < 1) throw std::invalid_argument("GreedyFP needs scale >= 1");
      break;
    case FpKind::BestCandidate:
      if (c.n_cand_fixed) {
        if (*c.n_cand_fixed < 1) throw std::invalid_argument("nCand must be >= 1");
      } else {
        if (c.scale < 1) throw std::invalid_argument("best candidate needs scale >= 1");
        if (c.max_cand && *c.max_cand < 1) throw std::invalid_argument("maxCand must be >= 1");
      }
      break;
    case FpKind::Hybrid:
      if (c.scale < 1) throw std::invalid_argument("hybrid needs scale >= 1");
      if (!c.refresh_count || *c.refresh_count < 1) {
        throw std::invalid_argument("hybrid needs refreshCount >= 1");
      }
      break;
  }
}

}  // namespace

std::vector<double> run_farthest(CandidateDrawer& drawer, std::span<const double> fixed,
                                 const FpPlan& plan, Rng& rng, SelectionTrace* trace) {
  validate_plan(plan);
  const std::size_t dim = drawer.dim();
  std::vector<double> chosen;
  chosen.reserve(plan.n * dim);
  if (plan.n == 0) return chosen;

  // `all` is the growing set every candidate is measured against.
  std::vector<double> all(fixed.begin(), fixed.end());
  auto take = [&](std::span<const double> p) {
    chosen.insert(chosen.end(), p.begin(), p.end());
    all.insert(all.end(), p.begin(), p.end());
  };

  if (plan.kind == FpKind::BestCandidate) {
    Pool batch(dim, plan.config.metric);
    for (std::size_t k = 0; k < plan.n; ++k) {
      const std::size_t sample_index = all.size() / dim + 1;
      if (all.empty() && !drawer.domain().has_density()) {
        // First sample: a single random point.
        batch.fill(drawer, rng, 1);
        batch.record(trace, 0, true);
        take(batch.point(0));
        continue;
      }
      batch.fill(drawer, rng, bc_batch_size(plan.config, sample_index));
      if (trace) ++trace->pool_generations;
      std::size_t pick;
      bool random = all.empty();
      if (random) {
        pick = batch.random_pick(rng);
      } else {
        batch.measure_against(all);
        pick = batch.best();
      }
      batch.record(trace, pick, random);
      take(batch.point(pick));
    }
    return chosen;
  }

  const std::size_t pool_size = checked_product(plan.n, plan.config.scale);
  const std::size_t refresh =
      plan.kind == FpKind::Hybrid ? *plan.config.refresh_count : plan.n;
  Pool pool(dim, plan.config.metric);
  for (std::size_t k = 0; k < plan.n; ++k) {
    if (k % refresh == 0) {
      pool.fill(drawer, rng, pool_size);
      if (trace) ++trace->pool_generations;
      pool.measure_against(all);
    }
    if (pool.size() == 0) throw SamplingError("candidate pool exhausted");
    std::size_t pick;
    const bool random = all.empty();
    if (random) {
      pick = pool.random_pick(rng);
    } else {
      pick = pool.best();
    }
    pool.record(trace, pick, random);
    std::vector<double> p(pool.point(pick).begin(), pool.point(pick).end());
    take(p);
    pool.erase(pick);
    pool.measure_against(p);
  }
  return chosen;
}

std::vector<std::size_t> select_from_pool(std::span<const double> candidates,
                                          std::span<const double> weights,
                                          std::span<const double> fixed, std::size_t dim,
                                          std::size_t count, Rng& rng, SelectionTrace* trace) {
  const std::size_t total = candidates.size() / dim;
  if (count > total) throw std::invalid_argument("cannot select more points than candidates");
  Pool pool(dim);
  pool.assign(candidates, weights);
  std::vector<std::size_t> origin(total);
  for (std::size_t c = 0; c < total; ++c) origin[c] = c;
  pool.measure_against(fixed);
  bool have_any = !fixed.empty();
  std::vector<std::size_t> picked;
  picked.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const bool random = !have_any;
    const std::size_t pick = random ? pool.random_pick(rng) : pool.best();
    pool.record(trace, pick, random);
    picked.push_back(origin[pick]);
    std::vector<double> p(pool.point(pick).begin(), pool.point(pick).end());
    pool.erase(pick);
    origin.erase(origin.begin() + static_cast<std::ptrdiff_t>(pick));
    pool.measure_against(p);
    have_any = true;
  }
  return picked;
}

SampleSet assemble(const Domain& domain, const Frame& frame, const SampleSet* existing,
                   std::span<const double> new_frame_points) {
  std::vector<double> coords;
  std::size_t frozen = 0;
  if (existing != nullptr) {
    coords = existing->coords();
    frozen = existing->size();
  }
  std::vector<double> mapped = frame.to_domain_all(new_frame_points);
  const std::size_t dim = domain.dim();
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const std::size_t k = i % dim;
    mapped[i] = std::clamp(mapped[i], domain.lower()[k], domain.upper()[k]);
  }
  coords.insert(coords.end(), mapped.begin(), mapped.end());
  return SampleSet(domain, std::move(coords), frozen);
}

}  // namespace spacefill::detail
