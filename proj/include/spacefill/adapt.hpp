#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "spacefill/core.hpp"
#include "spacefill/rng.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill {

enum class Algorithm { Random, GreedyFP, BestCandidate, Hybrid, Cvt };

/// Algorithm choice plus the parameters it reads.
struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::BestCandidate;
  FpConfig fp = FpConfig::best_candidate();
  CvtConfig cvt;
};

/// Index of the candidate maximizing density(c) * (distance from c to the
/// nearest selected point). With nothing selected, a single density-weighted
/// pass over the candidates picks one. Throws SamplingError if every density
/// is zero.
std::size_t density_weighted_select(const std::vector<Point>& candidates,
                                    const std::vector<Point>& selected, const Density& density,
                                    Rng& rng);

/// `count` points with density proportional to the domain's density, by
/// rejection against its declared maximum.
SampleSet rejection_sample_density(const Domain& domain, std::size_t count, Rng& rng);

/// Appends m points to `existing` (kept verbatim as the frozen prefix).
/// Farthest-point algorithms measure new candidates against everything
/// already present; GreedyFP draws a fresh pool for the new points.
SampleSet incremental_add(const SampleSet& existing, std::size_t m,
                          const AlgorithmConfig& config, Rng& rng);

/// Samples a domain that carries a viability predicate; every candidate and
/// every CVT probe point is rejection-filtered through it.
SampleSet viable_region_sample(const Domain& domain, std::size_t n,
                               const AlgorithmConfig& config, Rng& rng);

enum class ExpandCandidates {
  NewRegionOnly,  // candidates only from the added part of the box
  WholeDomain,    // candidates from the whole new box
};

/// Moves `existing` into `new_domain`. Points outside the new box are
/// dropped; if the new box reaches beyond the old one, m points are added.
/// Distances keep the unit scaling of the old domain. New-region candidates
/// come from a child stream of `rng`.
SampleSet expand_domain(const SampleSet& existing, const Domain& new_domain, std::size_t m,
                        const AlgorithmConfig& config, Rng& rng,
                        ExpandCandidates candidates = ExpandCandidates::NewRegionOnly);

struct CurveRegionSpec {
  SampleSet anchors;
  double half_width_fraction = 0.03;
  std::size_t candidates_per_anchor = 50;
  bool include_anchors = false;
};

/// Densifies the neighborhood of a set of anchor points. Each anchor gets a
/// candidate box of half-width half_width_fraction * |coordinate| per
/// dimension (clipped to the domain), and n points are picked greedily from
/// all candidates. The result is the anchors followed by the n picks.
/// `source_anchor`, when given, receives the anchor index behind each pick.
SampleSet curve_region_sample(const CurveRegionSpec& spec, std::size_t n, Rng& rng,
                              std::vector<std::size_t>* source_anchor = nullptr);

/// Pull-based reader of fixed-width records.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::optional<Point> next() = 0;
  /// Total number of records, if known without reading them.
  virtual std::optional<std::size_t> size_hint() const { return std::nullopt; }
};

class VectorRecordSource : public RecordSource {
 public:
  explicit VectorRecordSource(std::vector<Point> records) : records_(std::move(records)) {}
  std::optional<Point> next() override;
  std::optional<std::size_t> size_hint() const override { return records_.size(); }

 private:
  std::vector<Point> records_;
  std::size_t pos_ = 0;
};

/// Forwards to another source and counts records handed out.
class CountingRecordSource : public RecordSource {
 public:
  explicit CountingRecordSource(RecordSource& inner) : inner_(inner) {}
  std::optional<Point> next() override;
  std::optional<std::size_t> size_hint() const override { return inner_.size_hint(); }
  std::size_t reads() const { return reads_; }
  std::size_t exhausted_calls() const { return exhausted_; }

 private:
  RecordSource& inner_;
  std::size_t reads_ = 0;
  std::size_t exhausted_ = 0;
};

struct StreamConfig {
  std::size_t segment_size = 10000;
  std::size_t subset_size = 100;
  /// Overrides the source's size hint; one of the two must be available.
  std::optional<std::size_t> total_records;
};

/// One-pass subset selection. Each segment of records is a candidate batch;
/// the cumulative quota after a segment is floor(N * seen / total), and the
/// last segment makes up any shortfall so exactly N records are chosen. Picks
/// within a segment maximize distance to all earlier picks. A segment whose
/// quota equals its size is taken whole, in arrival order.
SampleSet stream_subset(RecordSource& source, const Domain& domain, const StreamConfig& config,
                        Rng& rng);

/// In-memory counterpart of stream_subset with a single segment.
SampleSet farthest_subset(const SampleSet& candidates, std::size_t n, Rng& rng);

}  // namespace spacefill
