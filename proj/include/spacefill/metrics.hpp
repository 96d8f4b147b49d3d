#pragma once

#include <cstddef>

#include "spacefill/core.hpp"

namespace spacefill {

inline constexpr int kDefaultPhiExponent = 50;

struct NnStats {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

/// Summary of sample-set quality. Distances are unit-frame.
struct QualityReport {
  double nn_min = 0.0;
  double nn_avg = 0.0;
  double nn_max = 0.0;
  double phi_p = 0.0;
  int p = kDefaultPhiExponent;
  double cl2 = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
};

/// Min, mean and max of nearest_neighbor_distances(set).
NnStats nn_stats(const SampleSet& set);

/// Power-mean of inverse pairwise distances, [sum_{i<j} d_ij^-p]^(1/p),
/// evaluated in log space so large p cannot overflow. Throws DuplicatePoints
/// (naming the first coincident pair) if any two points coincide.
double phi_p(const SampleSet& set, int p = kDefaultPhiExponent);

/// Centered L2 discrepancy of a set whose raw coordinates lie in [0,1]^d.
/// Throws std::invalid_argument for coordinates outside the unit cube.
double cl2_discrepancy(const SampleSet& set);

QualityReport quality_report(const SampleSet& set, int p = kDefaultPhiExponent);

}  // namespace spacefill
