#include "spacefill/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spacefill/io.hpp"
#include "spacefill/rng.hpp"

namespace spacefill {

namespace {

constexpr std::pair<MethodId, std::string_view> kMethodNames[] = {
    {MethodId::Random, "random"},
    {MethodId::Lhs, "lhs"},
    {MethodId::GreedyFP, "greedyfp"},
    {MethodId::BestCandidate, "bc"},
    {MethodId::Hybrid, "hybrid"},
};

}  // namespace

std::string_view method_name(MethodId id) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == id) return name;
  }
  return "unknown";
}

std::optional<MethodId> parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

MethodSpec MethodSpec::defaults(MethodId id) {
  MethodSpec m;
  m.id = id;
  switch (id) {
    case MethodId::Random:
    case MethodId::Lhs:
      break;
    case MethodId::GreedyFP:
      m.fp = FpConfig::greedy(10);
      break;
    case MethodId::BestCandidate:
      m.fp = FpConfig::best_candidate(250);
      break;
    case MethodId::Hybrid:
      m.fp = FpConfig::hybrid(10, 100);
      break;
  }
  m.fp.metric = CandidateMetric::Periodic;
  return m;
}

std::uint64_t cell_seed(std::uint64_t seed_base, MethodId method, std::size_t rep) {
  return combine_seed(combine_seed(seed_base, hash_name(method_name(method))), rep);
}

namespace {

SampleSet generate(const MethodSpec& m, const Domain& domain, std::size_t n, Rng& rng) {
  switch (m.id) {
    case MethodId::Random:
      return random_sampling(domain, n, rng);
    case MethodId::Lhs:
      return lhs_maximin(domain, n, rng, m.lhs);
    case MethodId::GreedyFP:
      return greedy_fp(domain, n, rng, m.fp);
    case MethodId::BestCandidate:
      return best_candidate(domain, n, rng, m.fp);
    case MethodId::Hybrid:
      return hybrid_bc_fp(domain, n, rng, m.fp);
  }
  throw std::invalid_argument("unknown method");
}

RawRow measure(const SampleSet& set, const std::string& method, bool latinized, std::size_t rep,
               std::uint64_t seed, int p) {
  RawRow r;
  r.method = method;
  r.latinized = latinized;
  r.rep = rep;
  r.seed = seed;
  r.nn_avg = nn_stats(set).avg;
  r.phi_p = phi_p(set, p);
  r.cl2 = cl2_discrepancy(set);
  return r;
}

}  // namespace

BenchReport run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  if (spec.methods.empty()) throw std::invalid_argument("experiment has no methods");
  if (spec.repetitions < 1) throw std::invalid_argument("experiment needs >= 1 repetition");
  BenchReport report;
  report.experiment = spec.name;
  report.dim = spec.dim;
  report.n_samples = spec.n_samples;
  report.repetitions = spec.repetitions;
  report.seed_base = spec.seed_base;
  report.phi_exponent = spec.phi_exponent;
  const Domain domain = Domain::unit(spec.dim);

  std::vector<CellSummary> failed;
  for (const MethodSpec& m : spec.methods) {
    const std::string name(method_name(m.id));
    std::vector<RawRow> rows;
    std::vector<SavedSet> sets;
    double seconds = 0.0;
    std::optional<std::string> failure;
    try {
      for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
        const std::uint64_t seed = cell_seed(spec.seed_base, m.id, rep);
        Rng rng(seed);
        const auto t0 = std::chrono::steady_clock::now();
        SampleSet plain = generate(m, domain, spec.n_samples, rng);
        std::optional<SampleSet> lat;
        if (spec.latinize_variants) {
          Rng lat_rng = Rng(seed).child(hash_name("latinize"));
          lat = latinize(plain, lat_rng);
        }
        seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        rows.push_back(measure(plain, name, false, rep, seed, spec.phi_exponent));
        if (lat) rows.push_back(measure(*lat, name, true, rep, seed, spec.phi_exponent));
        if (options.keep_sets) {
          sets.push_back(SavedSet{name, rep, false, plain});
          if (lat) sets.push_back(SavedSet{name, rep, true, *lat});
        }
      }
    } catch (const std::exception& e) {
      failure = e.what();
    }
    if (options.timing) report.timings.push_back(MethodTiming{name, seconds});
    if (failure) {
      for (bool latinized : {false, true}) {
        if (latinized && !spec.latinize_variants) continue;
        CellSummary c;
        c.method = name;
        c.latinized = latinized;
        c.failure = failure;
        report.cells.push_back(c);
      }
      continue;
    }
    for (CellSummary& c : summarize(rows)) report.cells.push_back(std::move(c));
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    for (SavedSet& s : sets) report.sets.push_back(std::move(s));
  }
  return report;
}

std::vector<ExperimentSpec> paper_suite() {
  const MethodId all[] = {MethodId::Random, MethodId::Lhs, MethodId::GreedyFP,
                          MethodId::BestCandidate, MethodId::Hybrid};
  struct Shape {
    const char* name;
    std::size_t dim, n, reps;
  };
  const Shape shapes[] = {
      {"2D-500", 2, 500, 50}, {"4D-500", 4, 500, 50}, {"4D-1000", 4, 1000, 20}, {"10D-1000", 10, 1000, 20}};
  std::vector<ExperimentSpec> out;
  for (const Shape& s : shapes) {
    ExperimentSpec e;
    e.name = s.name;
    e.dim = s.dim;
    e.n_samples = s.n;
    e.repetitions = s.reps;
    for (MethodId id : all) e.methods.push_back(MethodSpec::defaults(id));
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CellSummary> summarize(const std::vector<RawRow>& rows) {
  std::vector<std::pair<std::string, bool>> order;
  std::map<std::pair<std::string, bool>, std::vector<const RawRow*>> groups;
  for (const RawRow& r : rows) {
    auto key = std::make_pair(r.method, r.latinized);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<CellSummary> cells;
  for (const auto& key : order) {
    auto members = groups[key];
    // Reduce in repetition order so the sums do not depend on row order.
    std::stable_sort(members.begin(), members.end(),
                     [](const RawRow* a, const RawRow* b) { return a->rep < b->rep; });
    CellSummary c;
    c.method = key.first;
    c.latinized = key.second;
    c.reps = members.size();
    for (const RawRow* r : members) {
      c.mean_nn_avg += r->nn_avg;
      c.mean_phi_p += r->phi_p;
      c.mean_cl2 += r->cl2;
    }
    const double n = static_cast<double>(members.size());
    c.mean_nn_avg /= n;
    c.mean_phi_p /= n;
    c.mean_cl2 /= n;
    cells.push_back(c);
  }
  return cells;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

const CellSummary* find_cell(const BenchReport& r, const std::string& method, bool lat) {
  for (const CellSummary& c : r.cells) {
    if (c.method == method && c.latinized == lat) return &c;
  }
  return nullptr;
}

std::string format_table(const BenchReport& r) {
  std::ostringstream os;
  if (!r.experiment.empty()) {
    os << r.experiment << " (d=" << r.dim << ", N=" << r.n_samples << ", " << r.repetitions
       << " repetitions)\n";
  }
  const std::string phi = "phi" + std::to_string(r.phi_exponent);
  os << "method    " << pad("nnAvg", 10) << pad("nnAvg", 10) << pad(phi, 12) << pad(phi, 12)
     << pad("CL2", 10) << pad("CL2", 10) << pad("time", 11) << '\n';
  os << "          " << pad("no Lat", 10) << pad("Lat", 10) << pad("no Lat", 12)
     << pad("Lat", 12) << pad("no Lat", 10) << pad("Lat", 10) << pad("(s)", 11) << '\n';

  std::vector<std::string> methods;
  for (const CellSummary& c : r.cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
      methods.push_back(c.method);
    }
  }
  for (const std::string& m : methods) {
    std::string line = m;
    line.resize(10, ' ');
    const CellSummary* plain = find_cell(r, m, false);
    const CellSummary* lat = find_cell(r, m, true);
    auto cell = [](const CellSummary* c, double CellSummary::*field, int digits, std::size_t w) {
      if (c == nullptr) return pad("-", w);
      if (c->failure) return pad("failed", w);
      return pad(fixed(c->*field, digits), w);
    };
    line += cell(plain, &CellSummary::mean_nn_avg, 4, 10);
    line += cell(lat, &CellSummary::mean_nn_avg, 4, 10);
    line += cell(plain, &CellSummary::mean_phi_p, 3, 12);
    line += cell(lat, &CellSummary::mean_phi_p, 3, 12);
    line += cell(plain, &CellSummary::mean_cl2, 4, 10);
    line += cell(lat, &CellSummary::mean_cl2, 4, 10);
    std::string t = "-";
    for (const MethodTiming& mt : r.timings) {
      if (mt.method == m) t = fixed(mt.seconds, 2);
    }
    line += pad(t, 11);
    os << line << '\n';
    const CellSummary* failed = (plain && plain->failure) ? plain : (lat && lat->failure ? lat : nullptr);
    if (failed) os << "  " << m << " failed: " << *failed->failure << '\n';
  }
  return os.str();
}

constexpr const char* kCsvHeader =
    "record,experiment,dim,n_samples,repetitions,seed_base,phi_exponent,method,latinized,rep,"
    "seed,nn_avg,phi_p,cl2,seconds,failure";

std::string csv_text(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::string format_csv(const BenchReport& r) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  if (r.experiment.empty() && r.rows.empty() && r.cells.empty() && r.timings.empty()) {
    return os.str();
  }
  os << "experiment," << csv_text(r.experiment) << ',' << r.dim << ',' << r.n_samples << ','
     << r.repetitions << ',' << r.seed_base << ',' << r.phi_exponent << ",,,,,,,,,\n";
  for (const RawRow& row : r.rows) {
    os << "row,,,,,,," << row.method << ',' << (row.latinized ? 1 : 0) << ',' << row.rep << ','
       << row.seed << ',' << format_double(row.nn_avg) << ',' << format_double(row.phi_p) << ','
       << format_double(row.cl2) << ",,\n";
  }
  for (const CellSummary& c : r.cells) {
    os << "cell,,,,,,," << c.method << ',' << (c.latinized ? 1 : 0) << ',' << c.reps << ",,";
    if (c.failure) {
      os << ",,,," << csv_text(*c.failure) << '\n';
    } else {
      os << format_double(c.mean_nn_avg) << ',' << format_double(c.mean_phi_p) << ','
         << format_double(c.mean_cl2) << ",,\n";
    }
  }
  for (const MethodTiming& t : r.timings) {
    os << "time,,,,,,," << t.method << ",,,,,,," << format_double(t.seconds) << ",\n";
  }
  return os.str();
}

nlohmann::json to_json(const BenchReport& r) {
  using nlohmann::json;
  json j;
  j["schemaVersion"] = 1;
  j["experiment"] = r.experiment;
  j["dim"] = r.dim;
  j["nSamples"] = r.n_samples;
  j["repetitions"] = r.repetitions;
  j["seedBase"] = std::to_string(r.seed_base);
  j["phiExponent"] = r.phi_exponent;
  json cells = json::array();
  for (const CellSummary& c : r.cells) {
    json jc;
    jc["method"] = c.method;
    jc["latinized"] = c.latinized;
    jc["reps"] = c.reps;
    if (c.failure) {
      jc["failure"] = *c.failure;
    } else {
      jc["meanNnAvg"] = c.mean_nn_avg;
      jc["meanPhiP"] = c.mean_phi_p;
      jc["meanCl2"] = c.mean_cl2;
    }
    cells.push_back(jc);
  }
  j["cells"] = cells;
  json rows = json::array();
  for (const RawRow& row : r.rows) {
    rows.push_back({{"method", row.method},
                    {"latinized", row.latinized},
                    {"rep", row.rep},
                    {"seed", std::to_string(row.seed)},
                    {"nnAvg", row.nn_avg},
                    {"phiP", row.phi_p},
                    {"cl2", row.cl2}});
  }
  j["rows"] = rows;
  json timings = json::array();
  for (const MethodTiming& t : r.timings) {
    timings.push_back({{"method", t.method}, {"seconds", t.seconds}});
  }
  j["timings"] = timings;
  return j;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T parse_int(std::string_view s, std::size_t line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw CsvError(line, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw CsvError(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_report(const BenchReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table:
      return format_table(report);
    case ReportFormat::Csv:
      return format_csv(report);
    case ReportFormat::Json:
      return to_json(report).dump(2) + "\n";
  }
  throw std::invalid_argument("unknown report format");
}

BenchReport parse_report_csv(std::string_view text) {
  BenchReport r;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kCsvHeader) throw CsvError(1, "not a bench report header");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 16) throw CsvError(line_no, "expected 16 fields");
    if (f[0] == "experiment") {
      r.experiment = std::string(f[1]);
      r.dim = parse_int<std::size_t>(f[2], line_no);
      r.n_samples = parse_int<std::size_t>(f[3], line_no);
      r.repetitions = parse_int<std::size_t>(f[4], line_no);
      r.seed_base = parse_int<std::uint64_t>(f[5], line_no);
      r.phi_exponent = parse_int<int>(f[6], line_no);
    } else if (f[0] == "row") {
      RawRow row;
      row.method = std::string(f[7]);
      row.latinized = f[8] == "1";
      row.rep = parse_int<std::size_t>(f[9], line_no);
      row.seed = parse_int<std::uint64_t>(f[10], line_no);
      row.nn_avg = parse_real(f[11], line_no);
      row.phi_p = parse_real(f[12], line_no);
      row.cl2 = parse_real(f[13], line_no);
      r.rows.push_back(row);
    } else if (f[0] == "cell") {
      CellSummary c;
      c.method = std::string(f[7]);
      c.latinized = f[8] == "1";
      c.reps = parse_int<std::size_t>(f[9], line_no);
      if (!f[15].empty()) {
        c.failure = std::string(f[15]);
      } else {
        c.mean_nn_avg = parse_real(f[11], line_no);
        c.mean_phi_p = parse_real(f[12], line_no);
        c.mean_cl2 = parse_real(f[13], line_no);
      }
      r.cells.push_back(c);
    } else if (f[0] == "time") {
      r.timings.push_back(MethodTiming{std::string(f[7]), parse_real(f[14], line_no)});
    } else {
      throw CsvError(line_no, "unknown record '" + std::string(f[0]) + "'");
    }
  }
  return r;
}

}  // namespace spacefill
