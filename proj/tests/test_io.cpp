#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "spacefill/io.hpp"
#include "spacefill/samplers.hpp"

using namespace spacefill;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "spacefill_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Csv, HeaderAndLineEndings) {
  const SampleSet s = SampleSet::from_points(Domain::unit(3), {{0.5, 0.25, 1.0}});
  EXPECT_EQ(to_csv(s), "x0,x1,x2\n0.5,0.25,1\n");
}

TEST(Csv, RoundTripsExactly) {
  Rng rng(1);
  const SampleSet s = random_sampling(Domain({-3.0, 1e-9}, {7.5, 2e-9}), 200, rng);
  std::istringstream in(to_csv(s));
  EXPECT_EQ(read_sample_set(in, s.domain()).coords(), s.coords());
}

TEST(Csv, SeventeenDigitsAlways) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Csv, HeaderlessAndBlankLines) {
  std::istringstream in("\n0.1,0.2\n\n0.3,0.4\r\n");
  const CsvTable t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.lines, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(t.rows[1], (Point{0.3, 0.4}));
}

TEST(Csv, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_csv(in);
    } catch (const CsvError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("x0,x1\n0.1,0.2\n0.3\n"), 3u);
  EXPECT_EQ(line_of("x0,x1\n0.1,0.2\n0.3,abc\n"), 3u);
  EXPECT_EQ(line_of("x0\n0.1\ninf\n"), 3u);
  EXPECT_EQ(line_of("x0,x1\n"), 1u);
  EXPECT_EQ(line_of(""), 1u);
}

TEST(Csv, OutOfDomainRowIsReported) {
  std::istringstream in("x0,x1\n0.1,0.2\n0.3,1.2\n");
  try {
    read_sample_set(in, Domain::unit(2));
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(CsvRecordSource, CountsWithoutParsing) {
  const auto path = temp_file("records.csv", "x0,x1\n0.1,0.2\n\n0.3,0.4\n0.5,0.6");
  CsvRecordSource src(path.string());
  EXPECT_EQ(src.size_hint(), 3u);
  EXPECT_EQ(src.width_hint(), 2u);
  std::size_t n = 0;
  while (src.next()) ++n;
  EXPECT_EQ(n, 3u);
  EXPECT_FALSE(src.next());
}

TEST(CsvRecordSource, HeaderlessFile) {
  const auto path = temp_file("bare.csv", "0.1\n0.2\n");
  CsvRecordSource src(path.string());
  EXPECT_EQ(src.size_hint(), 2u);
}

TEST(CsvRecordSource, MissingFile) {
  EXPECT_THROW(CsvRecordSource("/nonexistent/file.csv"), std::invalid_argument);
}

TEST(Svg, OneCirclePerPoint) {
  Rng rng(2);
  const SampleSet s = random_sampling(Domain::unit(2), 100, rng);
  const std::string svg = render_svg(s, {});
  EXPECT_EQ(count(svg, "<circle"), 100u);
  EXPECT_EQ(count(svg, "#d62728"), 0u);
  PlotOptions o;
  o.split = 50;
  const std::string two = render_svg(s, o);
  EXPECT_EQ(count(two, "#1f77b4"), 50u);
  EXPECT_EQ(count(two, "#d62728"), 50u);
}

TEST(Svg, ProjectsChosenAxes) {
  const SampleSet s = SampleSet::from_points(Domain::unit(4), {{0.0, 0.3, 0.6, 1.0}});
  PlotOptions o;
  o.dim_x = 0;
  o.dim_y = 3;
  const std::string svg = render_svg(s, o);
  // x = 0 sits on the left margin and y = 1 on the top margin.
  EXPECT_NE(svg.find("cx=\"20.000\" cy=\"20.000\""), std::string::npos);
  o.dim_y = 4;
  EXPECT_THROW(render_svg(s, o), std::invalid_argument);
}
