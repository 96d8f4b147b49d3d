#pragma once

// Internal machinery shared by the samplers and adaptation routines. Points
// are handled in a "frame": an affine copy of a reference domain's box mapped
// to [0,1]^d, so all distances are unit-scaled.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spacefill/core.hpp"
#include "spacefill/rng.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill::detail {

class Frame {
 public:
  explicit Frame(const Domain& reference);

  std::size_t dim() const { return lower_.size(); }
  void to_domain(std::span<const double> u, std::span<double> x) const;
  void to_frame(std::span<const double> x, std::span<double> u) const;
  std::vector<double> to_frame_all(std::span<const double> coords) const;
  std::vector<double> to_domain_all(std::span<const double> coords) const;
  double to_frame_value(std::size_t k, double x) const {
    return (x - lower_[k]) / range_[k];
  }

 private:
  std::vector<double> lower_;
  std::vector<double> range_;
};

/// Frame-coordinate box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box unit(std::size_t dim);
  bool contains(std::span<const double> u) const;
  /// Open-interior containment, used for exclusion zones.
  bool interior_contains(std::span<const double> u) const;
};

/// Draws uniform candidates in a frame box, rejecting points the domain does
/// not admit and points inside an optional exclusion box. Gives up with
/// RegionTooSmall after kRejectionCap consecutive rejections.
class CandidateDrawer {
 public:
  CandidateDrawer(const Domain& domain, const Frame& frame, Box region,
                  std::optional<Box> exclude = std::nullopt);

  /// Writes a frame-coordinate point to `u` and returns the density weight
  /// at it (1 when the domain has no density).
  double draw(Rng& rng, std::span<double> u);

  /// Uniform draw in the region that only applies viability/exclusion and
  /// then accepts with probability density / density_max.
  void draw_from_density(Rng& rng, std::span<double> u);

  const Domain& domain() const { return domain_; }
  std::size_t dim() const { return frame_.dim(); }

 private:
  bool accept(std::span<const double> u, std::span<double> x);

  const Domain& domain_;
  const Frame& frame_;
  Box region_;
  std::optional<Box> exclude_;
  std::vector<double> scratch_;
};

enum class FpKind { Greedy, BestCandidate, Hybrid };

struct FpPlan {
  FpKind kind = FpKind::Greedy;
  std::size_t n = 0;
  FpConfig config;
};

/// Runs a farthest-point style selection and returns the new points in frame
/// coordinates. `fixed` holds frame coordinates of points that already exist
/// and that every new point is measured against.
std::vector<double> run_farthest(CandidateDrawer& drawer, std::span<const double> fixed,
                                 const FpPlan& plan, Rng& rng, SelectionTrace* trace);

/// Greedy max-min selection over a given candidate list (no drawing). Returns
/// indices into `candidates` in selection order. When `fixed` is empty and no
/// point has been selected, the first pick is uniform over the candidates (or
/// density-weighted when `weights` is non-empty).
std::vector<std::size_t> select_from_pool(std::span<const double> candidates,
                                          std::span<const double> weights,
                                          std::span<const double> fixed, std::size_t dim,
                                          std::size_t count, Rng& rng,
                                          SelectionTrace* trace = nullptr);

/// Minimum squared distance from p to any row of `points`.
double min_sq_to(std::span<const double> p, std::span<const double> points, std::size_t dim);
/// Same with unit-period wraparound in every coordinate.
double min_sq_to_periodic(std::span<const double> p, std::span<const double> points,
                          std::size_t dim);

/// One-pass density-weighted draw: walks the candidates in order accepting
/// candidate c with probability w_c / max(w). Throws SamplingError if all
/// weights are zero.
std::size_t weighted_pick(std::span<const double> weights, Rng& rng);

/// Assembles an output set: existing points verbatim, then new frame points
/// mapped into the domain and clamped to its box.
SampleSet assemble(const Domain& domain, const Frame& frame, const SampleSet* existing,
                   std::span<const double> new_frame_points);

}  // namespace spacefill::detail
