#include "spacefill/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace spacefill {

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const SampleSet& set) {
  const std::size_t dim = set.dim();
  for (std::size_t k = 0; k < dim; ++k) out << (k ? ",x" : "x") << k;
  out << '\n';
  std::string line;
  for (std::size_t i = 0; i < set.size(); ++i) {
    line.clear();
    for (std::size_t k = 0; k < dim; ++k) {
      if (k) line += ',';
      line += format_double(set[i][k]);
    }
    line += '\n';
    out << line;
  }
}

std::string to_csv(const SampleSet& set) {
  std::ostringstream os;
  write_csv(os, set);
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool looks_like_header(std::string_view line) {
  for (std::string_view cell : split_cells(line)) {
    if (!parse_number(cell)) return true;
  }
  return false;
}

Point parse_row(std::string_view line, std::size_t line_no, std::size_t width) {
  const auto cells = split_cells(line);
  if (width != 0 && cells.size() != width) {
    throw CsvError(line_no, "expected " + std::to_string(width) + " values, found " +
                                std::to_string(cells.size()));
  }
  Point p;
  p.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto v = parse_number(cells[k]);
    if (!v) {
      throw CsvError(line_no, "value " + std::to_string(k + 1) + " is not a number: '" +
                                  std::string(trim(cells[k])) + "'");
    }
    if (!std::isfinite(*v)) throw CsvError(line_no, "value " + std::to_string(k + 1) + " is not finite");
    p.push_back(*v);
  }
  return p;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (width == 0) {
      width = split_cells(line).size();
      if (looks_like_header(line)) continue;
    }
    table.rows.push_back(parse_row(line, line_no, width));
    table.lines.push_back(line_no);
  }
  if (table.rows.empty()) throw CsvError(line_no == 0 ? 1 : line_no, "no data rows");
  return table;
}

SampleSet read_sample_set(std::istream& in, const Domain& domain) {
  const CsvTable table = read_csv(in);
  SampleSet set(domain);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const Point& p = table.rows[i];
    if (p.size() != domain.dim()) {
      throw CsvError(table.lines[i], "expected " + std::to_string(domain.dim()) +
                                         " values, found " + std::to_string(p.size()));
    }
    if (!domain.admits(p)) throw CsvError(table.lines[i], "point lies outside the domain");
    set.append(p);
  }
  return set;
}

namespace {

/// Non-blank lines, counted on raw bytes.
std::size_t count_lines(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::size_t lines = 0;
  bool content = false;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    const std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      const char c = buf[i];
      if (c == '\n') {
        if (content) ++lines;
        content = false;
      } else if (c != '\r' && c != ' ' && c != '\t') {
        content = true;
      }
    }
  }
  if (content) ++lines;
  return lines;
}

}  // namespace

CsvRecordSource::CsvRecordSource(const std::string& path) : in_(nullptr) {
  const std::size_t lines = count_lines(path);
  file_.open(path);
  if (!file_) throw std::invalid_argument("cannot open " + path);
  in_ = &file_;
  // Peek at the first line to decide whether the count includes a header.
  std::string first;
  while (std::getline(file_, first) && blank(first)) {
  }
  file_.clear();
  file_.seekg(0);
  total_ = (!first.empty() && looks_like_header(first) && lines > 0) ? lines - 1 : lines;
  if (!blank(first)) width_hint_ = split_cells(first).size();
}

CsvRecordSource::CsvRecordSource(std::istream& in, std::optional<std::size_t> total)
    : in_(&in), total_(total) {}

std::optional<Point> CsvRecordSource::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_;
    if (blank(line)) continue;
    if (width_ == 0) {
      width_ = split_cells(line).size();
      if (looks_like_header(line)) continue;
    }
    return parse_row(line, line_, width_);
  }
  return std::nullopt;
}

std::string render_svg(const SampleSet& set, const PlotOptions& options) {
  const std::size_t dim = set.dim();
  if (options.dim_x >= dim || options.dim_y >= dim || options.dim_x == options.dim_y) {
    throw std::invalid_argument("plot dimensions must be two distinct indices below " +
                                std::to_string(dim));
  }
  const Domain& domain = set.domain();
  const int size = options.size_px;
  const double margin = 20.0;
  const double span = size - 2.0 * margin;
  const double radius = 3.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << span << "\" height=\""
     << span << "\" fill=\"white\" stroke=\"black\"/>\n";
  const auto sx = options.dim_x;
  const auto sy = options.dim_y;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double u = (set[i][sx] - domain.lower()[sx]) / domain.range(sx);
    const double v = (set[i][sy] - domain.lower()[sy]) / domain.range(sy);
    const bool second = options.split && i >= *options.split;
    char cx[32], cy[32];
    std::snprintf(cx, sizeof(cx), "%.3f", margin + u * span);
    std::snprintf(cy, sizeof(cy), "%.3f", margin + (1.0 - v) * span);
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius << "\" fill=\""
       << (second ? "#d62728" : "#1f77b4") << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spacefill
