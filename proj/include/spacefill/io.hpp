#pragma once

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spacefill/adapt.hpp"
#include "spacefill/core.hpp"

namespace spacefill {

/// Malformed CSV input. line() is 1-based and counts the header.
class CsvError : public std::invalid_argument {
 public:
  CsvError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest round-trip text is not used on purpose: every value gets 17
/// significant digits so files from different builds compare byte for byte.
std::string format_double(double v);

/// Header "x0,...,x{d-1}", then one row per point, LF endings.
void write_csv(std::ostream& out, const SampleSet& set);
std::string to_csv(const SampleSet& set);

/// Parsed CSV body with the source line of each row.
struct CsvTable {
  std::vector<Point> rows;
  std::vector<std::size_t> lines;
};

/// Reads a headered (or headerless) numeric CSV. Rejects ragged rows,
/// non-numeric or non-finite cells, and empty input.
CsvTable read_csv(std::istream& in);

/// Reads a CSV into `domain`; a point outside the box is reported with its
/// line number.
SampleSet read_sample_set(std::istream& in, const Domain& domain);

/// Streams records from a CSV file one line at a time. The record count is
/// taken up front from a raw scan of line breaks, without parsing.
class CsvRecordSource : public RecordSource {
 public:
  explicit CsvRecordSource(const std::string& path);
  /// Reads from an already open stream; `total` supplies the size hint.
  CsvRecordSource(std::istream& in, std::optional<std::size_t> total);

  std::optional<Point> next() override;
  std::optional<std::size_t> size_hint() const override { return total_; }
  /// Column count of the first line, known up front for file sources.
  std::optional<std::size_t> width_hint() const { return width_hint_; }

 private:
  std::ifstream file_;
  std::istream* in_;
  std::optional<std::size_t> total_;
  std::optional<std::size_t> width_hint_;
  std::size_t line_ = 0;
  std::size_t width_ = 0;
};

struct PlotOptions {
  std::size_t dim_x = 0;
  std::size_t dim_y = 1;
  /// Points with index < split use the first color, the rest the second.
  std::optional<std::size_t> split;
  int size_px = 480;
};

/// Standalone SVG scatter of a 2D projection, one <circle> per point.
std::string render_svg(const SampleSet& set, const PlotOptions& options);

}  // namespace spacefill
