#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "spacefill/core.hpp"
#include "spacefill/rng.hpp"

namespace spacefill {

// ---------------------------------------------------------------------------
// Configuration records
// ---------------------------------------------------------------------------

enum class BinPlacement { RandomInBin, BinCenter };

/// How a candidate interchange is scored in lhs_maximin. Both modes make the
/// same decisions and give bit-identical output; FullRecompute rescans all
/// pairs after each interchange, Incremental maintains per-sample nearest
/// neighbors and only rescans rows touched by the swap.
enum class InterchangeEvaluation { FullRecompute, Incremental };

struct LhsConfig {
  std::size_t n_tries = 10;
  std::size_t n_interchanges = 100;
  BinPlacement placement = BinPlacement::RandomInBin;
  InterchangeEvaluation evaluation = InterchangeEvaluation::FullRecompute;
};

/// Probabilistic Lloyd iteration parameters. With alpha = beta = (0, 1) each
/// generator is replaced by the mean of its assigned probe points.
struct CvtConfig {
  std::size_t niter = 100;
  std::size_t ppi = 10000;
  double alpha1 = 0.0;
  double alpha2 = 1.0;
  double beta1 = 0.0;
  double beta2 = 1.0;
  double convergence_tol = 1e-6;

  void validate() const;
};

struct PoissonConfig {
  double radius = 0.08;  // unit-frame distance
  std::size_t ncand = 30;

  void validate() const;
};

/// Distance used to score farthest-point candidates. Periodic wraps each
/// unit-frame coordinate difference (min(|a|, 1 - |a|)), so the box faces do
/// not attract samples. Output quality metrics are always Euclidean.
enum class CandidateMetric { Euclidean, Periodic };

/// Shared parameters of the farthest-point family (GreedyFP, best candidate,
/// hybrid). Which fields matter depends on the algorithm:
///   greedy_fp       pool of n * scale candidates drawn once
///   best_candidate  n_cand_fixed per sample when set, otherwise
///                   min(scale * i, max_cand) for the i-th sample
///   hybrid_bc_fp    pool of n * scale, regenerated every refresh_count picks
struct FpConfig {
  std::size_t scale = 10;
  std::optional<std::size_t> n_cand_fixed;
  std::optional<std::size_t> max_cand;
  std::optional<std::size_t> refresh_count;
  CandidateMetric metric = CandidateMetric::Euclidean;

  static FpConfig greedy(std::size_t scale = 10);
  static FpConfig best_candidate(std::size_t n_cand = 250);
  static FpConfig best_candidate_scaled(std::size_t scale, std::size_t max_cand);
  static FpConfig hybrid(std::size_t scale = 10, std::size_t refresh_count = 100);
};

enum class GridMode { CellCenter, StratifiedRandom };

// ---------------------------------------------------------------------------
// Instrumentation (optional out-parameters, used by tests and tooling)
// ---------------------------------------------------------------------------

struct LhsTrace {
  struct Attempt {
    std::size_t row;      // member of the min pair that was swapped
    std::size_t partner;  // randomly chosen row
    std::size_t column;
    std::size_t pair_first;   // min pair before the attempt
    std::size_t pair_second;
    double min_before;
    double min_after;  // min pair distance of the tentative sampling
    bool accepted;
  };
  struct Try {
    double initial_min = 0.0;
    double final_min = 0.0;
    std::vector<Attempt> attempts;
  };
  std::vector<Try> tries;
  std::size_t best_try = 0;
};

/// One selection of a farthest-point style sampler. Coordinates are in the
/// unit frame of the sampling domain.
struct SelectionStep {
  std::vector<double> candidates;  // row-major
  std::vector<double> weights;     // density at each candidate (1 if none)
  std::size_t chosen = 0;
  bool random_pick = false;  // first sample with nothing to measure against
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  std::size_t pool_generations = 0;
};

struct CvtStats {
  std::size_t iterations = 0;
  double last_max_shift = 0.0;
  bool ppi_below_n = false;
};

// ---------------------------------------------------------------------------
// Samplers. Each returns points in domain coordinates, in generation order.
// Distances are measured in the unit frame of the domain.
// ---------------------------------------------------------------------------

SampleSet random_sampling(const Domain& domain, std::size_t n, Rng& rng);

/// One point per cell of a regular grid, first dimension varying slowest.
/// Cells whose point fails the viability predicate are dropped.
SampleSet grid_sampling(const Domain& domain, const std::vector<std::size_t>& bins_per_dim,
                        GridMode mode, Rng& rng, std::size_t max_points = 10'000'000);

SampleSet lhs_basic(const Domain& domain, std::size_t n, Rng& rng,
                    BinPlacement placement = BinPlacement::RandomInBin);

/// Approximate maximin LHS: interchanges always involve a member of the
/// current closest pair and are kept only if they strictly increase the
/// minimum pairwise distance. Best of n_tries restarts.
SampleSet lhs_maximin(const Domain& domain, std::size_t n, Rng& rng, const LhsConfig& config,
                      LhsTrace* trace = nullptr);

/// Rank-and-shift transform giving the set one value per 1/N bin in every
/// dimension. Values already in their rank's bin are left untouched; output
/// keeps the input order.
SampleSet latinize(const SampleSet& set, Rng& rng);

SampleSet cvt_sampling(const Domain& domain, std::size_t n, Rng& rng, const CvtConfig& config,
                       CvtStats* stats = nullptr);

/// Active-list Poisson disk sampling; the number of points is an output.
SampleSet poisson_disk(const Domain& domain, const PoissonConfig& config, Rng& rng);

SampleSet greedy_fp(const Domain& domain, std::size_t n, Rng& rng, const FpConfig& config,
                    SelectionTrace* trace = nullptr);
/// Appends n points to `existing`, which becomes the frozen prefix.
SampleSet greedy_fp(const SampleSet& existing, std::size_t n, Rng& rng, const FpConfig& config,
                    SelectionTrace* trace = nullptr);

SampleSet best_candidate(const Domain& domain, std::size_t n, Rng& rng, const FpConfig& config,
                         SelectionTrace* trace = nullptr);
SampleSet best_candidate(const SampleSet& existing, std::size_t n, Rng& rng,
                         const FpConfig& config, SelectionTrace* trace = nullptr);

SampleSet hybrid_bc_fp(const Domain& domain, std::size_t n, Rng& rng, const FpConfig& config,
                       SelectionTrace* trace = nullptr);
SampleSet hybrid_bc_fp(const SampleSet& existing, std::size_t n, Rng& rng,
                       const FpConfig& config, SelectionTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Latin-property helpers
// ---------------------------------------------------------------------------

/// Half-open bin [k/n, (k+1)/n) of a unit-frame value, last bin closed at 1.
std::size_t latin_bin(double unit_value, std::size_t n);

/// True if every dimension has exactly one value per bin.
bool has_latin_property(const SampleSet& set);

}  // namespace spacefill
