#include "spacefill/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spacefill {

DuplicatePoints::DuplicatePoints(std::size_t i, std::size_t j)
    : SamplingError("duplicate points at indices " + std::to_string(i) +
                    " and " + std::to_string(j)),
      i_(i),
      j_(j) {}

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw std::invalid_argument("domain needs dim >= 1");
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("domain bounds have different lengths");
  }
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (!std::isfinite(lower_[k]) || !std::isfinite(upper_[k])) {
      throw std::invalid_argument("domain bounds must be finite");
    }
    if (!(lower_[k] < upper_[k])) {
      throw std::invalid_argument("degenerate domain: lower >= upper in dimension " +
                                  std::to_string(k));
    }
  }
}

Domain Domain::unit(std::size_t dim) {
  return Domain(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

Domain& Domain::with_viability(Viability viability) {
  viability_ = std::move(viability);
  return *this;
}

Domain& Domain::with_density(Density density, double density_max) {
  if (!(density_max > 0.0) || !std::isfinite(density_max)) {
    throw std::invalid_argument("density maximum must be positive and finite");
  }
  density_ = std::move(density);
  density_max_ = density_max;
  return *this;
}

bool Domain::in_box(PointView p) const {
  if (p.size() != dim()) return false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] >= lower_[k] && p[k] <= upper_[k])) return false;
  }
  return true;
}

bool Domain::admits(PointView p) const {
  return in_box(p) && (!viability_ || viability_(p));
}

double Domain::density_at(PointView p) const {
  if (!density_) return 1.0;
  const double v = density_(p);
  if (!std::isfinite(v) || v < 0.0) {
    throw SamplingError("density returned a negative or non-finite value");
  }
  if (v > density_max_) {
    throw SamplingError("density value " + std::to_string(v) +
                        " exceeds declared maximum " + std::to_string(density_max_));
  }
  return v;
}

bool Domain::is_unit() const {
  return std::all_of(lower_.begin(), lower_.end(), [](double v) { return v == 0.0; }) &&
         std::all_of(upper_.begin(), upper_.end(), [](double v) { return v == 1.0; });
}

bool Domain::box_contains(const Domain& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (other.lower_[k] < lower_[k] || other.upper_[k] > upper_[k]) return false;
  }
  return true;
}

bool Domain::box_disjoint(const Domain& other) const {
  for (std::size_t k = 0; k < dim(); ++k) {
    if (other.upper_[k] < lower_[k] || other.lower_[k] > upper_[k]) return true;
  }
  return false;
}

SampleSet::SampleSet(Domain domain) : domain_(std::move(domain)) {}

SampleSet::SampleSet(Domain domain, std::vector<double> coords, std::size_t frozen)
    : domain_(std::move(domain)), coords_(std::move(coords)), frozen_(frozen) {
  if (coords_.size() % dim() != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of dim");
  }
  for (std::size_t i = 0; i < size(); ++i) check_point((*this)[i], i);
  if (frozen_ > size()) throw std::invalid_argument("frozen count exceeds size");
}

SampleSet SampleSet::from_points(Domain domain, const std::vector<Point>& points,
                                 std::size_t frozen) {
  std::vector<double> coords;
  coords.reserve(points.size() * domain.dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != domain.dim()) {
      throw std::invalid_argument("point " + std::to_string(i) +
                                  " has the wrong dimension");
    }
    coords.insert(coords.end(), points[i].begin(), points[i].end());
  }
  return SampleSet(std::move(domain), std::move(coords), frozen);
}

Point SampleSet::point(std::size_t i) const {
  auto v = (*this)[i];
  return Point(v.begin(), v.end());
}

std::vector<Point> SampleSet::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

void SampleSet::append(PointView p) {
  if (p.size() != dim()) throw std::invalid_argument("point has the wrong dimension");
  check_point(p, size());
  coords_.insert(coords_.end(), p.begin(), p.end());
}

void SampleSet::set_frozen_count(std::size_t frozen) {
  if (frozen > size()) throw std::invalid_argument("frozen count exceeds size");
  frozen_ = frozen;
}

void SampleSet::check_point(PointView p, std::size_t index) const {
  for (double v : p) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("point " + std::to_string(index) +
                                  " has a non-finite coordinate");
    }
  }
  if (!domain_.in_box(p)) {
    throw std::invalid_argument("point " + std::to_string(index) +
                                " lies outside the domain box");
  }
  if (domain_.has_viability() && !domain_.viability()(p)) {
    throw std::invalid_argument("point " + std::to_string(index) +
                                " violates the viability predicate");
  }
}

SampleSet scale_to_unit(const SampleSet& set) {
  const Domain& d = set.domain();
  return SampleSet(Domain::unit(d.dim()), unit_coords(set), set.frozen_count());
}

SampleSet scale_from_unit(const SampleSet& unit_set, const Domain& target) {
  if (unit_set.dim() != target.dim()) {
    throw std::invalid_argument("dimension mismatch in scale_from_unit");
  }
  const std::size_t dim = target.dim();
  std::vector<double> coords(unit_set.coords());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::size_t k = i % dim;
    coords[i] = std::clamp(target.lower()[k] + coords[i] * target.range(k),
                           target.lower()[k], target.upper()[k]);
  }
  return SampleSet(target.box_only(), std::move(coords), unit_set.frozen_count());
}

std::vector<double> unit_coords(const SampleSet& set) {
  const Domain& d = set.domain();
  std::vector<double> coords(set.coords());
  if (d.is_unit()) return coords;
  const std::size_t dim = d.dim();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::size_t k = i % dim;
    coords[i] = std::clamp((coords[i] - d.lower()[k]) / d.range(k), 0.0, 1.0);
  }
  return coords;
}

std::vector<double> nearest_neighbor_distances(const SampleSet& set) {
  const std::size_t n = set.size();
  if (n < 2) throw std::invalid_argument("nearest-neighbor distances need >= 2 points");
  const std::size_t dim = set.dim();
  const std::vector<double> u = unit_coords(set);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    PointView pi(u.data() + i * dim, dim);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = squared_distance(pi, PointView(u.data() + j * dim, dim));
      if (s < best[i]) best[i] = s;
      if (s < best[j]) best[j] = s;
    }
  }
  for (double& b : best) b = std::sqrt(b);
  return best;
}

MinPair min_pair(std::span<const double> coords, std::size_t dim) {
  const std::size_t n = dim == 0 ? 0 : coords.size() / dim;
  if (n < 2) throw std::invalid_argument("min_pair needs >= 2 points");
  MinPair best{0, 1, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    PointView pi(coords.data() + i * dim, dim);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = squared_distance(pi, PointView(coords.data() + j * dim, dim));
      if (s < best.distance) best = {i, j, s};
    }
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

MinPair min_pair(const SampleSet& set) {
  if (set.size() < 2) throw std::invalid_argument("min_pair needs >= 2 points");
  const std::vector<double> u = unit_coords(set);
  return min_pair(u, set.dim());
}

}  // namespace spacefill
