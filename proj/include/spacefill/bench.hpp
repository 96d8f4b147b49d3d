#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spacefill/core.hpp"
#include "spacefill/metrics.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill {

enum class MethodId { Random, Lhs, GreedyFP, BestCandidate, Hybrid };

/// Stable lowercase id ("random", "lhs", "greedyfp", "bc", "hybrid").
std::string_view method_name(MethodId id);
std::optional<MethodId> parse_method(std::string_view name);

struct MethodSpec {
  MethodId id = MethodId::Random;
  LhsConfig lhs;
  FpConfig fp;

  /// Benchmark defaults: LHS 10 tries x 100 interchanges, GreedyFP scale 10,
  /// BC 250 candidates, hybrid scale 10 refreshing every 100, with periodic
  /// candidate scoring for the farthest-point family.
  static MethodSpec defaults(MethodId id);
};

struct ExperimentSpec {
  std::string name;
  std::size_t dim = 2;
  std::size_t n_samples = 500;
  std::size_t repetitions = 1;
  std::vector<MethodSpec> methods;
  bool latinize_variants = true;
  std::uint64_t seed_base = 20240601;
  int phi_exponent = kDefaultPhiExponent;
};

/// Metrics of one generated (and possibly latinized) set.
struct RawRow {
  std::string method;
  bool latinized = false;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double nn_avg = 0.0;
  double phi_p = 0.0;
  double cl2 = 0.0;
};

/// Means over the repetitions of one (method, variant) pair.
struct CellSummary {
  std::string method;
  bool latinized = false;
  std::size_t reps = 0;
  double mean_nn_avg = 0.0;
  double mean_phi_p = 0.0;
  double mean_cl2 = 0.0;
  /// Set when a repetition threw; the cell then has no means.
  std::optional<std::string> failure;
};

struct MethodTiming {
  std::string method;
  /// Wall time of generation plus latinization over all repetitions.
  double seconds = 0.0;
};

struct SavedSet {
  std::string method;
  std::size_t rep = 0;
  bool latinized = false;
  SampleSet set;
};

struct BenchReport {
  std::string experiment;
  std::size_t dim = 0;
  std::size_t n_samples = 0;
  std::size_t repetitions = 0;
  std::uint64_t seed_base = 0;
  int phi_exponent = kDefaultPhiExponent;
  std::vector<CellSummary> cells;
  std::vector<RawRow> rows;
  std::vector<MethodTiming> timings;  // empty when timing was off
  std::vector<SavedSet> sets;         // filled only on request
};

struct RunOptions {
  bool timing = true;
  bool keep_sets = false;
};

/// seed = combine_seed(combine_seed(seed_base, hash_name(method)), rep).
std::uint64_t cell_seed(std::uint64_t seed_base, MethodId method, std::size_t rep);

/// Runs every method for every repetition, sequentially. A sampler error
/// marks that method's cells as failed and the run continues.
BenchReport run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// The four comparison experiments: 2D-500 and 4D-500 with 50 repetitions,
/// 4D-1000 and 10D-1000 with 20, each over the five methods.
std::vector<ExperimentSpec> paper_suite();

/// Arithmetic means of the raw rows, cell order following first appearance.
std::vector<CellSummary> summarize(const std::vector<RawRow>& rows);

enum class ReportFormat { Table, Csv, Json };

std::string format_report(const BenchReport& report, ReportFormat format);

/// Inverse of format_report(..., Csv). Saved sets are not part of the CSV.
BenchReport parse_report_csv(std::string_view text);

}  // namespace spacefill
