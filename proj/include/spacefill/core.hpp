#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spacefill {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Allowed-region predicate, evaluated in domain coordinates.
using Viability = std::function<bool(PointView)>;
/// Nonnegative density, evaluated in domain coordinates.
using Density = std::function<double(PointView)>;

/// Runtime failure of a sampler or metric (as opposed to a bad argument,
/// which is reported with std::invalid_argument).
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many consecutive rejections while looking for a viable point.
class RegionTooSmall : public SamplingError {
 public:
  using SamplingError::SamplingError;
};

/// Two points coincide where a metric needs distinct points.
class DuplicatePoints : public SamplingError {
 public:
  DuplicatePoints(std::size_t i, std::size_t j);
  std::size_t first() const { return i_; }
  std::size_t second() const { return j_; }

 private:
  std::size_t i_, j_;
};

/// Consecutive rejections tolerated before giving up on a region.
inline constexpr std::size_t kRejectionCap = 1'000'000;

/// Axis-aligned box with optional viability predicate and density.
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper);

  static Domain unit(std::size_t dim);

  Domain& with_viability(Viability viability);
  Domain& with_density(Density density, double density_max);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double range(std::size_t k) const { return upper_[k] - lower_[k]; }

  bool has_viability() const { return static_cast<bool>(viability_); }
  bool has_density() const { return static_cast<bool>(density_); }
  double density_max() const { return density_max_; }
  const Viability& viability() const { return viability_; }
  const Density& density() const { return density_; }

  /// True if p lies in the closed box.
  bool in_box(PointView p) const;
  /// In the box and accepted by the viability predicate.
  bool admits(PointView p) const;
  /// Density at p. Throws SamplingError if the value is negative, not finite,
  /// or exceeds the declared maximum.
  double density_at(PointView p) const;

  /// Same box, no predicate and no density.
  Domain box_only() const { return Domain(lower_, upper_); }
  bool is_unit() const;
  bool box_contains(const Domain& other) const;
  bool box_disjoint(const Domain& other) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  Viability viability_;
  Density density_;
  double density_max_ = 0.0;
};

/// Ordered points inside a Domain. Points before frozen_count() are
/// pre-existing samples that later operations must carry through untouched.
class SampleSet {
 public:
  explicit SampleSet(Domain domain);
  /// Validates every point against the domain (box and viability).
  SampleSet(Domain domain, std::vector<double> coords, std::size_t frozen = 0);

  static SampleSet from_points(Domain domain, const std::vector<Point>& points,
                               std::size_t frozen = 0);

  const Domain& domain() const { return domain_; }
  std::size_t dim() const { return domain_.dim(); }
  std::size_t size() const { return dim() == 0 ? 0 : coords_.size() / dim(); }
  bool empty() const { return coords_.empty(); }
  std::size_t frozen_count() const { return frozen_; }

  PointView operator[](std::size_t i) const {
    return PointView(coords_.data() + i * dim(), dim());
  }
  Point point(std::size_t i) const;
  std::vector<Point> points() const;
  /// Row-major coordinates, size() * dim() values.
  const std::vector<double>& coords() const { return coords_; }

  /// Appends a validated point.
  void append(PointView p);
  void set_frozen_count(std::size_t frozen);

  friend bool operator==(const SampleSet& a, const SampleSet& b) {
    return a.coords_ == b.coords_ && a.frozen_ == b.frozen_ &&
           a.domain_.lower() == b.domain_.lower() &&
           a.domain_.upper() == b.domain_.upper();
  }

 private:
  void check_point(PointView p, std::size_t index) const;

  Domain domain_;
  std::vector<double> coords_;
  std::size_t frozen_ = 0;
};

/// Squared Euclidean distance.
inline double squared_distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// Maps a set onto [0,1]^d. Throws std::invalid_argument on a degenerate
/// dimension. The result has no viability predicate or density.
SampleSet scale_to_unit(const SampleSet& set);
/// Inverse of scale_to_unit onto `target`.
SampleSet scale_from_unit(const SampleSet& unit_set, const Domain& target);

/// Coordinates of point i of `set` in the unit frame of its domain.
std::vector<double> unit_coords(const SampleSet& set);

/// Distance of each point to its nearest other point, measured in the unit
/// frame of the set's domain. Throws std::invalid_argument if size() < 2.
std::vector<double> nearest_neighbor_distances(const SampleSet& set);

struct MinPair {
  std::size_t first;
  std::size_t second;
  double distance;
};

/// Closest pair in the unit frame; ties go to the lexicographically smallest
/// (first, second). Throws std::invalid_argument if size() < 2.
MinPair min_pair(const SampleSet& set);
/// Same, for row-major coordinates already in the working frame.
MinPair min_pair(std::span<const double> coords, std::size_t dim);

}  // namespace spacefill
