#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "detail/working.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill {

namespace {

using detail::Frame;

/// Value in bin k of n, nudged so that latin_bin() agrees with k even when
/// (k + offset) / n rounds onto the bin edge.
double value_in_bin(std::size_t k, double offset, std::size_t n) {
  double v = (static_cast<double>(k) + offset) / static_cast<double>(n);
  while (latin_bin(v, n) > k) v = std::nextafter(v, 0.0);
  while (latin_bin(v, n) < k) v = std::nextafter(v, 1.0);
  return v;
}

/// Basic LHS in the unit frame, row-major.
std::vector<double> basic_unit(std::size_t n, std::size_t dim, Rng& rng,
                               BinPlacement placement) {
  std::vector<std::vector<std::size_t>> perms(dim, std::vector<std::size_t>(n));
  for (auto& perm : perms) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
  }
  std::vector<double> u(n * dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double offset = placement == BinPlacement::BinCenter ? 0.5 : rng.uniform01();
      u[i * dim + j] = value_in_bin(perms[j][i], offset, n);
    }
  }
  return u;
}

struct PairSq {
  std::size_t first;
  std::size_t second;
  double sq;
};

PairSq min_pair_sq(std::span<const double> u, std::size_t dim) {
  const MinPair mp = min_pair(u, dim);
  // min_pair returns the root; recompute the exact square for comparisons.
  const double sq = squared_distance(u.subspan(mp.first * dim, dim),
                                     u.subspan(mp.second * dim, dim));
  return {mp.first, mp.second, sq};
}

/// Per-row nearest neighbor (squared distance, lowest index) so that the
/// closest pair can be maintained across interchanges touching two rows.
class NearestCache {
 public:
  NearestCache(std::span<const double> u, std::size_t dim)
      : u_(u), dim_(dim), n_(u.size() / dim), sq_(n_), arg_(n_) {
    for (std::size_t i = 0; i < n_; ++i) rebuild_row(i);
  }

  PairSq global() const {
    double m = std::numeric_limits<double>::infinity();
    std::size_t lowest = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (sq_[i] < m) {
        m = sq_[i];
        lowest = i;
      }
    }
    // The lowest row in any closest pair has its partner at a higher index.
    return {lowest, arg_[lowest], m};
  }

  void rows_changed(std::size_t a, std::size_t b) {
    rebuild_row(a);
    rebuild_row(b);
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == a || k == b) continue;
      if (arg_[k] == a || arg_[k] == b) {
        rebuild_row(k);
        continue;
      }
      for (std::size_t t : {std::min(a, b), std::max(a, b)}) {
        const double s = dist(k, t);
        if (s < sq_[k] || (s == sq_[k] && t < arg_[k])) {
          sq_[k] = s;
          arg_[k] = t;
        }
      }
    }
  }

  struct Snapshot {
    std::vector<double> sq;
    std::vector<std::size_t> arg;
  };
  Snapshot save() const { return {sq_, arg_}; }
  void restore(Snapshot s) {
    sq_ = std::move(s.sq);
    arg_ = std::move(s.arg);
  }

 private:
  double dist(std::size_t i, std::size_t j) const {
    return squared_distance(u_.subspan(i * dim_, dim_), u_.subspan(j * dim_, dim_));
  }

  void rebuild_row(std::size_t i) {
    sq_[i] = std::numeric_limits<double>::infinity();
    arg_[i] = i;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double s = dist(i, j);
      if (s < sq_[i]) {
        sq_[i] = s;
        arg_[i] = j;
      }
    }
  }

  std::span<const double> u_;
  std::size_t dim_;
  std::size_t n_;
  std::vector<double> sq_;
  std::vector<std::size_t> arg_;
};

void reject_viability(const Domain& domain, const char* who) {
  if (domain.has_viability()) {
    throw std::invalid_argument(std::string(who) +
                                " does not support viability predicates");
  }
}

}  // namespace

std::size_t latin_bin(double unit_value, std::size_t n) {
  if (!(unit_value > 0.0)) return 0;
  if (unit_value >= 1.0) return n - 1;
  const auto b = static_cast<std::size_t>(std::floor(unit_value * static_cast<double>(n)));
  return std::min(b, n - 1);
}

bool has_latin_property(const SampleSet& set) {
  const std::size_t n = set.size();
  const std::size_t dim = set.dim();
  if (n == 0) return true;
  const std::vector<double> u = unit_coords(set);
  std::vector<char> seen(n);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t b = latin_bin(u[i * dim + j], n);
      if (seen[b]) return false;
      seen[b] = 1;
    }
  }
  return true;
}

SampleSet lhs_basic(const Domain& domain, std::size_t n, Rng& rng, BinPlacement placement) {
  if (n < 1) throw std::invalid_argument("LHS needs n >= 1");
  reject_viability(domain, "LHS");
  const Frame frame(domain);
  return detail::assemble(domain, frame, nullptr, basic_unit(n, domain.dim(), rng, placement));
}

SampleSet lhs_maximin(const Domain& domain, std::size_t n, Rng& rng, const LhsConfig& config,
                      LhsTrace* trace) {
  if (n < 2) throw std::invalid_argument("maximin LHS needs n >= 2");
  if (config.n_tries < 1) throw std::invalid_argument("maximin LHS needs nTries >= 1");
  reject_viability(domain, "LHS");
  const std::size_t dim = domain.dim();
  const bool incremental = config.evaluation == InterchangeEvaluation::Incremental;

  std::vector<double> best;
  double best_sq = -1.0;
  for (std::size_t t = 0; t < config.n_tries; ++t) {
    std::vector<double> u = basic_unit(n, dim, rng, config.placement);
    std::optional<NearestCache> cache;
    PairSq current;
    if (incremental) {
      cache.emplace(u, dim);
      current = cache->global();
    } else {
      current = min_pair_sq(u, dim);
    }
    LhsTrace::Try try_log;
    try_log.initial_min = std::sqrt(current.sq);

    for (std::size_t s = 0; s < config.n_interchanges; ++s) {
      const std::size_t row = rng.index(2) == 0 ? current.first : current.second;
      const std::size_t col = rng.index(dim);
      const std::size_t partner = rng.index(n);
      std::swap(u[row * dim + col], u[partner * dim + col]);

      PairSq next;
      std::optional<NearestCache::Snapshot> snapshot;
      if (row == partner) {
        next = current;
      } else if (incremental) {
        snapshot = cache->save();
        cache->rows_changed(row, partner);
        next = cache->global();
      } else {
        next = min_pair_sq(u, dim);
      }

      const bool accepted = next.sq > current.sq;
      if (trace) {
        try_log.attempts.push_back({row, partner, col, current.first, current.second,
                                    std::sqrt(current.sq), std::sqrt(next.sq), accepted});
      }
      if (accepted) {
        current = next;
      } else {
        std::swap(u[row * dim + col], u[partner * dim + col]);
        if (snapshot) cache->restore(std::move(*snapshot));
      }
    }

    try_log.final_min = std::sqrt(current.sq);
    if (trace) trace->tries.push_back(std::move(try_log));
    if (current.sq > best_sq) {
      best_sq = current.sq;
      best = std::move(u);
      if (trace) trace->best_try = t;
    }
  }
  const Frame frame(domain);
  return detail::assemble(domain, frame, nullptr, best);
}

SampleSet latinize(const SampleSet& set, Rng& rng) {
  const std::size_t n = set.size();
  if (n < 1) throw std::invalid_argument("latinize needs at least one point");
  const Domain& domain = set.domain();
  const std::size_t dim = set.dim();
  std::vector<double> coords = set.coords();
  std::vector<std::size_t> order(n);
  std::vector<double> u(n);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = std::clamp((coords[i * dim + j] - domain.lower()[j]) / domain.range(j), 0.0, 1.0);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
    for (std::size_t rank = 0; rank < n; ++rank) {
      const std::size_t i = order[rank];
      if (latin_bin(u[i], n) == rank) continue;
      const double moved = value_in_bin(rank, rng.uniform01(), n);
      double x = domain.lower()[j] + moved * domain.range(j);
      x = std::clamp(x, domain.lower()[j], domain.upper()[j]);
      // Mapping back into the domain must not leave the rank's bin.
      const double back = (x - domain.lower()[j]) / domain.range(j);
      if (latin_bin(back, n) != rank) {
        x = domain.lower()[j] +
            value_in_bin(rank, 0.5, n) * domain.range(j);
      }
      coords[i * dim + j] = x;
    }
  }
  return SampleSet(domain, std::move(coords));
}

}  // namespace spacefill
