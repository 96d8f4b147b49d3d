#include "spacefill/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "detail/working.hpp"

namespace spacefill {

using detail::Box;
using detail::CandidateDrawer;
using detail::Frame;

namespace {

double checked_density(const Density& density, PointView p) {
  const double v = density(p);
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw SamplingError("density returned a negative or non-finite value");
  }
  return v;
}

/// Farthest-point family over an arbitrary drawer, relative to `fixed`.
std::vector<double> run_algorithm(CandidateDrawer& drawer, std::span<const double> fixed,
                                  std::size_t n, const AlgorithmConfig& config, Rng& rng) {
  if (config.algorithm == Algorithm::Random) {
    const std::size_t dim = drawer.dim();
    std::vector<double> u(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
      drawer.draw(rng, std::span<double>(u).subspan(i * dim, dim));
    }
    return u;
  }
  detail::FpKind kind;
  switch (config.algorithm) {
    case Algorithm::GreedyFP:
      kind = detail::FpKind::Greedy;
      break;
    case Algorithm::BestCandidate:
      kind = detail::FpKind::BestCandidate;
      break;
    case Algorithm::Hybrid:
      kind = detail::FpKind::Hybrid;
      break;
    default:
      throw std::invalid_argument("CVT cannot add points to an existing set");
  }
  return detail::run_farthest(drawer, fixed, detail::FpPlan{kind, n, config.fp}, rng, nullptr);
}

/// Points in `set` that `domain` admits, in their original order.
SampleSet retained_points(const SampleSet& set, const Domain& domain) {
  std::vector<double> coords;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (domain.admits(set[i])) coords.insert(coords.end(), set[i].begin(), set[i].end());
  }
  std::size_t kept = coords.size() / set.dim();
  return SampleSet(domain, std::move(coords), kept);
}

}  // namespace

std::size_t density_weighted_select(const std::vector<Point>& candidates,
                                    const std::vector<Point>& selected, const Density& density,
                                    Rng& rng) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to select from");
  if (!density) throw std::invalid_argument("density_weighted_select needs a density");
  std::vector<double> w(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) w[c] = checked_density(density, candidates[c]);
  if (selected.empty()) return detail::weighted_pick(w, rng);
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    throw SamplingError("all candidate densities are zero");
  }

  // density * distance compared as density^2 * squared distance.
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double minsq = std::numeric_limits<double>::infinity();
    for (const Point& s : selected) {
      if (s.size() != candidates[c].size()) {
        throw std::invalid_argument("candidate and selected points differ in dimension");
      }
      minsq = std::min(minsq, squared_distance(candidates[c], s));
    }
    const double score = w[c] * w[c] * minsq;
    if (score > best) {
      best = score;
      arg = c;
    }
  }
  return arg;
}

SampleSet rejection_sample_density(const Domain& domain, std::size_t count, Rng& rng) {
  if (!domain.has_density()) throw std::invalid_argument("domain has no density");
  const Frame frame(domain);
  CandidateDrawer drawer(domain, frame, Box::unit(domain.dim()));
  const std::size_t dim = domain.dim();
  std::vector<double> u(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    drawer.draw_from_density(rng, std::span<double>(u).subspan(i * dim, dim));
  }
  return detail::assemble(domain, frame, nullptr, u);
}

SampleSet incremental_add(const SampleSet& existing, std::size_t m,
                          const AlgorithmConfig& config, Rng& rng) {
  if (config.algorithm == Algorithm::Cvt) {
    throw std::invalid_argument("incremental addition supports GreedyFP, BC, hybrid, random");
  }
  if (m == 0) return existing;
  const Domain& domain = existing.domain();
  const Frame frame(domain);
  CandidateDrawer drawer(domain, frame, Box::unit(domain.dim()));
  const std::vector<double> fixed = frame.to_frame_all(existing.coords());
  const auto fresh = run_algorithm(drawer, fixed, m, config, rng);
  return detail::assemble(domain, frame, &existing, fresh);
}

SampleSet viable_region_sample(const Domain& domain, std::size_t n,
                               const AlgorithmConfig& config, Rng& rng) {
  if (!domain.has_viability()) {
    throw std::invalid_argument("viable_region_sample needs a viability predicate");
  }
  switch (config.algorithm) {
    case Algorithm::Random:
      return random_sampling(domain, n, rng);
    case Algorithm::GreedyFP:
      return greedy_fp(domain, n, rng, config.fp);
    case Algorithm::BestCandidate:
      return best_candidate(domain, n, rng, config.fp);
    case Algorithm::Hybrid:
      return hybrid_bc_fp(domain, n, rng, config.fp);
    case Algorithm::Cvt:
      return cvt_sampling(domain, n, rng, config.cvt);
  }
  throw std::invalid_argument("unknown algorithm");
}

SampleSet expand_domain(const SampleSet& existing, const Domain& new_domain, std::size_t m,
                        const AlgorithmConfig& config, Rng& rng, ExpandCandidates candidates) {
  const Domain& old_domain = existing.domain();
  if (new_domain.dim() != old_domain.dim()) {
    throw std::invalid_argument("new domain has a different dimension");
  }
  if (config.algorithm == Algorithm::Cvt) {
    throw std::invalid_argument("domain expansion supports GreedyFP, BC, hybrid, random");
  }
  if (config.fp.metric == CandidateMetric::Periodic) {
    // The wrap period is the old box, which the new region extends past.
    throw std::invalid_argument("periodic candidate scoring is not defined for expansion");
  }
  if (old_domain.box_disjoint(new_domain)) {
    throw std::invalid_argument("new domain does not overlap the old one");
  }
  SampleSet kept = retained_points(existing, new_domain);
  // Nothing new to cover when the new box lies inside the old one.
  if (old_domain.box_contains(new_domain) || m == 0) return kept;

  const std::size_t dim = new_domain.dim();
  const Frame frame(old_domain);
  Box region{std::vector<double>(dim), std::vector<double>(dim)};
  for (std::size_t k = 0; k < dim; ++k) {
    region.lo[k] = frame.to_frame_value(k, new_domain.lower()[k]);
    region.hi[k] = frame.to_frame_value(k, new_domain.upper()[k]);
  }
  std::optional<Box> exclude;
  if (candidates == ExpandCandidates::NewRegionOnly) exclude = Box::unit(dim);

  Rng stream = rng.child(hash_name("expand_domain"));
  CandidateDrawer drawer(new_domain, frame, region, exclude);
  const std::vector<double> fixed = frame.to_frame_all(kept.coords());
  const auto fresh = run_algorithm(drawer, fixed, m, config, stream);
  return detail::assemble(new_domain, frame, &kept, fresh);
}

SampleSet curve_region_sample(const CurveRegionSpec& spec, std::size_t n, Rng& rng,
                              std::vector<std::size_t>* source_anchor) {
  const SampleSet& anchors = spec.anchors;
  if (anchors.empty()) throw std::invalid_argument("curve region needs anchors");
  if (!(spec.half_width_fraction > 0.0) || !std::isfinite(spec.half_width_fraction)) {
    throw std::invalid_argument("half-width fraction must be positive");
  }
  if (spec.candidates_per_anchor < 1) {
    throw std::invalid_argument("need at least one candidate per anchor");
  }
  const std::size_t total = anchors.size() * spec.candidates_per_anchor;
  if (n > total) {
    throw std::invalid_argument("cannot select " + std::to_string(n) + " points from " +
                                std::to_string(total) + " candidates");
  }

  const Domain& domain = anchors.domain();
  const std::size_t dim = domain.dim();
  const Frame frame(domain);
  std::vector<Box> boxes;  // domain coordinates
  std::vector<double> cand(total * dim);
  std::vector<double> weights;
  if (domain.has_density()) weights.resize(total);
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    Box box{std::vector<double>(dim), std::vector<double>(dim)};
    Box region = box;
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = anchors[a][k];
      const double range = domain.range(k);
      // A width proportional to the coordinate collapses at zero.
      double h = spec.half_width_fraction * std::abs(v);
      if (std::abs(v) < 1e-9 * range) h = spec.half_width_fraction * range;
      box.lo[k] = std::max(domain.lower()[k], v - h);
      box.hi[k] = std::min(domain.upper()[k], v + h);
      region.lo[k] = frame.to_frame_value(k, box.lo[k]);
      region.hi[k] = frame.to_frame_value(k, box.hi[k]);
    }
    CandidateDrawer drawer(domain, frame, region);
    for (std::size_t c = 0; c < spec.candidates_per_anchor; ++c) {
      const std::size_t slot = a * spec.candidates_per_anchor + c;
      const double w = drawer.draw(rng, std::span<double>(cand).subspan(slot * dim, dim));
      if (!weights.empty()) weights[slot] = w;
    }
    boxes.push_back(std::move(box));
  }

  std::vector<double> fixed;
  if (spec.include_anchors) fixed = frame.to_frame_all(anchors.coords());
  const auto picks = detail::select_from_pool(cand, weights, fixed, dim, n, rng);

  std::vector<double> coords = anchors.coords();
  std::vector<double> x(dim);
  if (source_anchor) source_anchor->clear();
  for (std::size_t c : picks) {
    const std::size_t a = c / spec.candidates_per_anchor;
    frame.to_domain(std::span<const double>(cand).subspan(c * dim, dim), x);
    for (std::size_t k = 0; k < dim; ++k) x[k] = std::clamp(x[k], boxes[a].lo[k], boxes[a].hi[k]);
    coords.insert(coords.end(), x.begin(), x.end());
    if (source_anchor) source_anchor->push_back(a);
  }
  return SampleSet(domain, std::move(coords), anchors.size());
}

std::optional<Point> VectorRecordSource::next() {
  if (pos_ >= records_.size()) return std::nullopt;
  return records_[pos_++];
}

std::optional<Point> CountingRecordSource::next() {
  auto r = inner_.next();
  if (r) {
    ++reads_;
  } else {
    ++exhausted_;
  }
  return r;
}

namespace {

/// Picks `count` of the frame points in `batch`; a batch taken whole keeps
/// its order and consumes no randomness.
std::vector<std::size_t> pick_from_batch(std::span<const double> batch,
                                         std::span<const double> fixed, std::size_t dim,
                                         std::size_t count, Rng& rng) {
  const std::size_t size = batch.size() / dim;
  if (count == size) {
    std::vector<std::size_t> all(size);
    for (std::size_t i = 0; i < size; ++i) all[i] = i;
    return all;
  }
  return detail::select_from_pool(batch, {}, fixed, dim, count, rng);
}

}  // namespace

SampleSet stream_subset(RecordSource& source, const Domain& domain, const StreamConfig& config,
                        Rng& rng) {
  if (config.segment_size < 1) throw std::invalid_argument("segment size must be >= 1");
  if (config.subset_size < 1) throw std::invalid_argument("subset size must be >= 1");
  const std::optional<std::size_t> declared =
      config.total_records ? config.total_records : source.size_hint();
  if (!declared) throw std::invalid_argument("stream subset needs the total record count");
  const std::size_t total = *declared;
  const std::size_t n = config.subset_size;
  if (total < n) {
    throw SamplingError("source has " + std::to_string(total) + " records, fewer than " +
                        std::to_string(n));
  }

  const std::size_t dim = domain.dim();
  const Frame frame(domain);
  std::vector<double> chosen_frame;
  std::vector<double> chosen;  // original records
  std::size_t seen = 0;

  auto read = [&]() -> std::optional<Point> {
    std::optional<Point> r = source.next();
    if (r) {
      if (r->size() != dim) {
        throw std::invalid_argument("record " + std::to_string(seen + 1) + " has " +
                                    std::to_string(r->size()) + " values, expected " +
                                    std::to_string(dim));
      }
      if (!domain.admits(*r)) {
        throw std::invalid_argument("record " + std::to_string(seen + 1) +
                                    " lies outside the domain");
      }
      ++seen;
    }
    return r;
  };

  // One record of lookahead tells whether a segment is the last.
  std::optional<Point> pending = read();
  std::vector<double> segment, segment_frame;
  std::vector<double> u(dim);
  std::size_t processed = 0;
  while (pending) {
    segment.clear();
    segment_frame.clear();
    while (pending && segment.size() < config.segment_size * dim) {
      segment.insert(segment.end(), pending->begin(), pending->end());
      frame.to_frame(*pending, u);
      segment_frame.insert(segment_frame.end(), u.begin(), u.end());
      pending = read();
    }
    const std::size_t have = chosen.size() / dim;
    const std::size_t seg_count = segment.size() / dim;
    processed += seg_count;
    const bool last = !pending;
    std::size_t target;
    if (last) {
      target = n;
    } else {
      // A declared total that is too small caps the share at 1.
      const std::size_t s = std::min(processed, total);
      target = s != 0 && n > std::numeric_limits<std::size_t>::max() / s
                   ? static_cast<std::size_t>(static_cast<long double>(n) * s / total)
                   : n * s / total;
    }
    std::size_t quota = target > have ? target - have : 0;
    if (quota > seg_count) {
      if (last) {
        throw SamplingError("stream ended after " + std::to_string(seen) +
                            " records; cannot select " + std::to_string(n));
      }
      quota = seg_count;
    }
    for (std::size_t i : pick_from_batch(segment_frame, chosen_frame, dim, quota, rng)) {
      chosen.insert(chosen.end(), segment.begin() + i * dim, segment.begin() + (i + 1) * dim);
      chosen_frame.insert(chosen_frame.end(), segment_frame.begin() + i * dim,
                          segment_frame.begin() + (i + 1) * dim);
    }
  }
  if (chosen.size() / dim != n) {
    throw SamplingError("stream ended after " + std::to_string(seen) +
                        " records; cannot select " + std::to_string(n));
  }
  return SampleSet(domain, std::move(chosen));
}

SampleSet farthest_subset(const SampleSet& candidates, std::size_t n, Rng& rng) {
  if (n > candidates.size()) {
    throw std::invalid_argument("cannot select more points than candidates");
  }
  const std::size_t dim = candidates.dim();
  const std::vector<double> u = Frame(candidates.domain()).to_frame_all(candidates.coords());
  std::vector<double> coords;
  coords.reserve(n * dim);
  for (std::size_t i : pick_from_batch(u, {}, dim, n, rng)) {
    const PointView p = candidates[i];
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return SampleSet(candidates.domain(), std::move(coords));
}

}  // namespace spacefill
