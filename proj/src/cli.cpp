#include "spacefill/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spacefill/adapt.hpp"
#include "spacefill/bench.hpp"
#include "spacefill/io.hpp"
#include "spacefill/metrics.hpp"
#include "spacefill/samplers.hpp"

namespace spacefill::cli {

namespace {

using json = nlohmann::json;

/// Bad flags, config files or parameters. Maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
  T v{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(what + ": cannot parse '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(item, what));
  if (out.empty()) throw ConfigError(what + " is empty");
  return out;
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t value) {
  if (flag != nullptr && flag->count() > 0) return value;
  if (const char* env = std::getenv("SPACEFILL_SEED")) {
    return parse_number<std::uint64_t>(env, "SPACEFILL_SEED");
  }
  throw ConfigError("no seed given: pass --seed or set SPACEFILL_SEED");
}

// ---------------------------------------------------------------------------
// Algorithm parameters
// ---------------------------------------------------------------------------

class Params {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  /// Accepts "k=v" items, several per argument when comma separated.
  void add_flags(const std::vector<std::string>& items) {
    for (const std::string& arg : items) {
      std::stringstream ss(arg);
      std::string kv;
      while (std::getline(ss, kv, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ConfigError("parameter '" + kv + "' is not of the form key=value");
        }
        set(kv.substr(0, eq), kv.substr(eq + 1));
      }
    }
  }

  void add_json(const json& obj) {
    if (!obj.is_object()) throw ConfigError("params must be an object");
    for (const auto& [key, v] : obj.items()) {
      if (v.is_string()) {
        set(key, v.get<std::string>());
      } else if (v.is_number() || v.is_boolean()) {
        set(key, v.dump());
      } else {
        throw ConfigError("parameter '" + key + "' must be a number, string or boolean");
      }
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::size_t size(const std::string& key, std::size_t fallback) {
    auto v = take(key);
    return v ? parse_number<std::size_t>(*v, "parameter " + key) : fallback;
  }

  double real(const std::string& key, double fallback) {
    auto v = take(key);
    return v ? parse_number<double>(*v, "parameter " + key) : fallback;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  /// Rejects keys the algorithm did not read.
  void finish(const std::string& algorithm) const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) {
        throw ConfigError("unknown parameter '" + key + "' for " + algorithm);
      }
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

CandidateMetric parse_metric(Params& p, CandidateMetric fallback) {
  const auto v = p.take("metric");
  if (!v) return fallback;
  if (*v == "euclidean") return CandidateMetric::Euclidean;
  if (*v == "periodic") return CandidateMetric::Periodic;
  throw ConfigError("metric must be euclidean or periodic");
}

/// Farthest-point parameters for "greedyfp", "bc" or "hybrid".
FpConfig fp_params(const std::string& algo, Params& p, FpConfig base) {
  if (algo == "greedyfp") {
    base.scale = p.size("scale", base.scale);
  } else if (algo == "bc") {
    if (p.has("maxcand") || p.has("scale")) {
      if (p.has("ncand")) throw ConfigError("bc takes either ncand or scale/maxcand");
      base.n_cand_fixed.reset();
      base.scale = p.size("scale", 10);
      base.max_cand = p.size("maxcand", 250);
    } else {
      base.n_cand_fixed = p.size("ncand", base.n_cand_fixed.value_or(250));
    }
  } else if (algo == "hybrid") {
    base.scale = p.size("scale", base.scale);
    base.refresh_count = p.size("refresh", base.refresh_count.value_or(100));
  }
  base.metric = parse_metric(p, base.metric);
  return base;
}

FpConfig fp_defaults(const std::string& algo) {
  if (algo == "bc") return FpConfig::best_candidate(250);
  if (algo == "hybrid") return FpConfig::hybrid(10, 100);
  return FpConfig::greedy(10);
}

BinPlacement parse_placement(Params& p) {
  const auto v = p.take("placement");
  if (!v || *v == "random") return BinPlacement::RandomInBin;
  if (*v == "center") return BinPlacement::BinCenter;
  throw ConfigError("placement must be random or center");
}

LhsConfig lhs_params(Params& p, LhsConfig base) {
  base.n_tries = p.size("ntries", base.n_tries);
  base.n_interchanges = p.size("ninterchanges", base.n_interchanges);
  base.placement = parse_placement(p);
  if (const auto v = p.take("evaluation")) {
    if (*v == "full") {
      base.evaluation = InterchangeEvaluation::FullRecompute;
    } else if (*v == "incremental") {
      base.evaluation = InterchangeEvaluation::Incremental;
    } else {
      throw ConfigError("evaluation must be full or incremental");
    }
  }
  if (base.n_tries < 1) throw ConfigError("ntries must be >= 1");
  return base;
}

Algorithm adapt_algorithm(const std::string& name) {
  if (name == "random") return Algorithm::Random;
  if (name == "greedyfp") return Algorithm::GreedyFP;
  if (name == "bc") return Algorithm::BestCandidate;
  if (name == "hybrid") return Algorithm::Hybrid;
  throw ConfigError("algorithm must be one of random, greedyfp, bc, hybrid");
}

// ---------------------------------------------------------------------------
// Domains and built-in functions
// ---------------------------------------------------------------------------

Domain make_domain(std::size_t dim, const std::vector<double>& lower,
                   const std::vector<double>& upper) {
  if (lower.empty() != upper.empty()) throw ConfigError("give both lower and upper bounds");
  if (lower.empty()) return Domain::unit(dim);
  if (lower.size() != dim || upper.size() != dim) {
    throw ConfigError("bounds need " + std::to_string(dim) + " values");
  }
  return Domain(lower, upper);
}

void apply_named(Domain& domain, const std::string& density, const std::string& viability) {
  const std::vector<double> lo = domain.lower();
  std::vector<double> range(domain.dim());
  for (std::size_t k = 0; k < domain.dim(); ++k) range[k] = domain.range(k);
  if (density == "gauss-center") {
    domain.with_density(
        [lo, range](PointView x) {
          double s = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k) {
            const double u = (x[k] - lo[k]) / range[k] - 0.5;
            s += u * u;
          }
          return std::exp(-20.0 * s);
        },
        1.0);
  } else if (density != "none" && !density.empty()) {
    throw ConfigError("unknown density '" + density + "' (known: gauss-center)");
  }
  if (viability == "parabola-above" || viability == "parabola-below") {
    if (domain.dim() < 2) throw ConfigError(viability + " needs dim >= 2");
    const bool above = viability == "parabola-above";
    domain.with_viability([lo, range, above](PointView x) {
      const double u0 = (x[0] - lo[0]) / range[0];
      const double u1 = (x[1] - lo[1]) / range[1];
      const double curve = 3.0 * (u0 - 0.5) * (u0 - 0.5);
      return above ? u1 >= curve : u1 <= curve;
    });
  } else if (viability != "none" && !viability.empty()) {
    throw ConfigError("unknown viability '" + viability +
                      "' (known: parabola-above, parabola-below)");
  }
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open " + path);
      stream_ = &file_;
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_;
};

void write_output(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
  if (!f) throw SamplingError("write to " + path + " failed");
}

SampleSet read_points(const std::string& path, std::istream& in, const std::vector<double>& lower,
                      const std::vector<double>& upper) {
  Input input(path, in);
  const CsvTable table = read_csv(input.get());
  const std::size_t dim = table.rows.front().size();
  const Domain domain = make_domain(dim, lower, upper);
  SampleSet set(domain);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!domain.in_box(table.rows[i])) {
      throw CsvError(table.lines[i], "point lies outside the domain");
    }
    set.append(table.rows[i]);
  }
  return set;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateConfig {
  std::string algorithm;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::vector<double> lower, upper;
  Params params;
  bool latinize = false;
  std::string density = "none";
  std::string viability = "none";
};

void load_config(const std::string& path, GenerateConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": top level must be an object");
  static const std::set<std::string> known = {"algorithm", "dim",      "n",       "seed",
                                              "domain",    "params",   "latinize", "density",
                                              "viability", "schemaVersion"};
  try {
    for (const auto& [key, v] : j.items()) {
      if (!known.count(key)) throw ConfigError(path + ": unknown key '" + key + "'");
      if (key == "algorithm") cfg.algorithm = v.get<std::string>();
      if (key == "dim") cfg.dim = v.get<std::size_t>();
      if (key == "n") cfg.n = v.get<std::size_t>();
      if (key == "seed") {
        cfg.seed = v.is_string() ? parse_number<std::uint64_t>(v.get<std::string>(), "seed")
                                 : v.get<std::uint64_t>();
      }
      if (key == "latinize") cfg.latinize = v.get<bool>();
      if (key == "density") cfg.density = v.is_null() ? "none" : v.get<std::string>();
      if (key == "viability") cfg.viability = v.is_null() ? "none" : v.get<std::string>();
      if (key == "params") cfg.params.add_json(v);
      if (key == "schemaVersion" && v.get<int>() != 1) {
        throw ConfigError(path + ": unsupported schemaVersion");
      }
      if (key == "domain") {
        for (const auto& [dk, dv] : v.items()) {
          if (dk == "lower") {
            cfg.lower = dv.get<std::vector<double>>();
          } else if (dk == "upper") {
            cfg.upper = dv.get<std::vector<double>>();
          } else {
            throw ConfigError(path + ": unknown key 'domain." + dk + "'");
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::size_t require_n(const GenerateConfig& cfg) {
  if (!cfg.n) throw ConfigError(cfg.algorithm + " needs --n");
  if (*cfg.n < 1) throw ConfigError("--n must be >= 1");
  return *cfg.n;
}

SampleSet generate_set(GenerateConfig& cfg, std::uint64_t seed) {
  const std::string& algo = cfg.algorithm;
  if (algo.empty()) throw ConfigError("no algorithm given (--algo)");
  std::size_t dim = cfg.dim.value_or(cfg.lower.size());
  if (dim == 0) throw ConfigError("no dimension given (--dim)");
  Domain domain = make_domain(dim, cfg.lower, cfg.upper);
  apply_named(domain, cfg.density, cfg.viability);
  Params& p = cfg.params;
  Rng rng(seed);

  const bool density_ok = algo == "random" || algo == "greedyfp" || algo == "bc" ||
                          algo == "hybrid" || algo == "cvt";
  if (domain.has_density() && !density_ok) {
    throw ConfigError(algo + " does not support a density");
  }
  if (cfg.latinize && domain.has_viability()) {
    throw ConfigError("latinize would move points out of the viable region");
  }

  std::optional<SampleSet> out;
  if (algo == "random") {
    p.finish(algo);
    const std::size_t n = require_n(cfg);
    out = domain.has_density() ? rejection_sample_density(domain, n, rng)
                               : random_sampling(domain, n, rng);
  } else if (algo == "grid" || algo == "stratified") {
    const auto bins_text = p.take("bins");
    if (!bins_text) throw ConfigError(algo + " needs params bins=B or bins=B0:B1:...");
    std::vector<std::size_t> bins;
    std::stringstream ss(*bins_text);
    std::string item;
    while (std::getline(ss, item, ':')) bins.push_back(parse_number<std::size_t>(item, "bins"));
    if (bins.size() == 1) bins.assign(dim, bins.front());
    p.finish(algo);
    out = grid_sampling(domain, bins, algo == "grid" ? GridMode::CellCenter : GridMode::StratifiedRandom,
                        rng);
  } else if (algo == "lhs-basic") {
    const BinPlacement placement = parse_placement(p);
    p.finish(algo);
    out = lhs_basic(domain, require_n(cfg), rng, placement);
  } else if (algo == "lhs-maximin" || algo == "lhs") {
    const LhsConfig lhs = lhs_params(p, LhsConfig{});
    p.finish(algo);
    out = lhs_maximin(domain, require_n(cfg), rng, lhs);
  } else if (algo == "cvt") {
    CvtConfig c;
    c.niter = p.size("niter", c.niter);
    c.ppi = p.size("ppi", c.ppi);
    c.alpha1 = p.real("alpha1", c.alpha1);
    c.alpha2 = p.real("alpha2", c.alpha2);
    c.beta1 = p.real("beta1", c.beta1);
    c.beta2 = p.real("beta2", c.beta2);
    c.convergence_tol = p.real("tol", c.convergence_tol);
    p.finish(algo);
    out = cvt_sampling(domain, require_n(cfg), rng, c);
  } else if (algo == "poisson") {
    PoissonConfig c;
    c.radius = p.real("radius", c.radius);
    c.ncand = p.size("ncand", c.ncand);
    p.finish(algo);
    out = poisson_disk(domain, c, rng);
  } else if (algo == "greedyfp" || algo == "bc" || algo == "hybrid") {
    const FpConfig fp = fp_params(algo, p, fp_defaults(algo));
    p.finish(algo);
    const std::size_t n = require_n(cfg);
    if (algo == "greedyfp") out = greedy_fp(domain, n, rng, fp);
    if (algo == "bc") out = best_candidate(domain, n, rng, fp);
    if (algo == "hybrid") out = hybrid_bc_fp(domain, n, rng, fp);
  } else {
    throw ConfigError("unknown algorithm '" + algo +
                      "' (known: random, grid, stratified, lhs-basic, lhs-maximin, cvt, poisson, "
                      "greedyfp, bc, hybrid)");
  }
  if (cfg.latinize) {
    Rng lat = Rng(seed).child(hash_name("latinize"));
    out = latinize(*out, lat);
  }
  return *out;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

std::vector<ExperimentSpec> load_bench_specs(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open spec " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  const json list = j.is_array() ? j : json::array({j});
  std::vector<ExperimentSpec> specs;
  static const std::set<std::string> known = {"schemaVersion", "name",       "dim",
                                              "nSamples",      "repetitions", "seedBase",
                                              "latinizeVariants", "phiExponent", "methods"};
  try {
    for (const json& e : list) {
      if (!e.is_object()) throw ConfigError(path + ": each experiment must be an object");
      ExperimentSpec spec;
      for (const auto& [key, v] : e.items()) {
        if (!known.count(key)) throw ConfigError(path + ": unknown key '" + key + "'");
      }
      spec.name = e.value("name", std::string("experiment"));
      spec.dim = e.at("dim").get<std::size_t>();
      spec.n_samples = e.at("nSamples").get<std::size_t>();
      spec.repetitions = e.value("repetitions", std::size_t{1});
      spec.latinize_variants = e.value("latinizeVariants", true);
      spec.phi_exponent = e.value("phiExponent", kDefaultPhiExponent);
      if (e.contains("seedBase")) {
        const json& s = e["seedBase"];
        spec.seed_base = s.is_string() ? parse_number<std::uint64_t>(s.get<std::string>(), "seedBase")
                                       : s.get<std::uint64_t>();
      }
      for (const json& m : e.at("methods")) {
        const std::string name = m.is_string() ? m.get<std::string>() : m.at("method").get<std::string>();
        const auto id = parse_method(name);
        if (!id) throw ConfigError(path + ": unknown method '" + name + "'");
        MethodSpec ms = MethodSpec::defaults(*id);
        Params p;
        if (m.is_object()) {
          for (const auto& [key, v] : m.items()) {
            if (key != "method" && key != "params") {
              throw ConfigError(path + ": unknown key '" + key + "' in method");
            }
          }
          if (m.contains("params")) p.add_json(m["params"]);
        }
        if (*id == MethodId::Lhs) ms.lhs = lhs_params(p, ms.lhs);
        if (*id == MethodId::GreedyFP || *id == MethodId::BestCandidate || *id == MethodId::Hybrid) {
          ms.fp = fp_params(name, p, ms.fp);
        }
        p.finish(name);
        spec.methods.push_back(ms);
      }
      if (spec.dim < 1 || spec.n_samples < 2 || spec.repetitions < 1 || spec.methods.empty()) {
        throw ConfigError(path + ": need dim >= 1, nSamples >= 2, repetitions >= 1, methods");
      }
      specs.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return specs;
}

std::string file_stem(const std::string& name) {
  std::string s = name;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s.empty() ? "experiment" : s;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

struct Options {
  // shared
  std::string in = "-";
  std::string out = "-";
  std::uint64_t seed = 0;
  std::string lower, upper;
  std::vector<std::string> params;
  // generate
  std::string algo;
  std::size_t dim = 0;
  std::size_t n = 0;
  bool latinize = false;
  std::string config;
  std::string density = "none";
  std::string viability = "none";
  // score
  int p = kDefaultPhiExponent;
  // subset
  std::size_t segment = 10000;
  std::size_t total = 0;
  // expand
  std::string new_lower, new_upper;
  std::size_t add = 0;
  std::string candidates = "new";
  // append-region
  std::string anchors;
  double halfwidth = 0.03;
  std::size_t cands_per_anchor = 50;
  bool include_anchors = false;
  // bench
  std::string suite;
  std::string spec;
  std::string format = "json";
  std::size_t reps_override = 0;
  bool save_sets = false;
  bool no_timing = false;
  std::uint64_t seed_base = 0;
  // plot
  std::string dims = "0,1";
  std::size_t split = 0;
};

std::vector<double> bounds(const std::string& text, const std::string& what) {
  return text.empty() ? std::vector<double>{} : parse_list(text, what);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Deterministic space-filling sampling", "spacefill"};
  app.require_subcommand(1);
  Options o;

  auto add_bounds = [&](CLI::App* c) {
    c->add_option("--lower", o.lower, "Domain lower bounds, comma separated");
    c->add_option("--upper", o.upper, "Domain upper bounds, comma separated");
  };

  auto* gen = app.add_subcommand("generate", "Generate a sample set as CSV");
  gen->add_option("--algo", o.algo, "Algorithm id");
  auto* gen_dim = gen->add_option("--dim", o.dim, "Number of dimensions");
  auto* gen_n = gen->add_option("--n", o.n, "Number of samples");
  auto* gen_seed = gen->add_option("--seed", o.seed, "64-bit seed");
  gen->add_option("--params", o.params, "Algorithm parameters k=v[,k=v...]");
  auto* gen_lat = gen->add_flag("--latinize", o.latinize, "Latinize the result");
  gen->add_option("--config", o.config, "JSON run configuration");
  auto* gen_density = gen->add_option("--density", o.density, "Built-in density: gauss-center");
  auto* gen_viab = gen->add_option("--viability", o.viability,
                                   "Built-in region: parabola-above, parabola-below");
  gen->add_option("--out", o.out, "Output file (default stdout)");
  add_bounds(gen);

  auto* score = app.add_subcommand("score", "Quality metrics of a CSV sample set");
  score->add_option("--in", o.in, "Input CSV (default stdin)");
  score->add_option("--p", o.p, "phi_p exponent")->check(CLI::PositiveNumber);

  auto* lat = app.add_subcommand("latinize", "Give a sample set the Latin property");
  lat->add_option("--in", o.in, "Input CSV (default stdin)");
  lat->add_option("--out", o.out, "Output file (default stdout)");
  auto* lat_seed = lat->add_option("--seed", o.seed, "64-bit seed");
  add_bounds(lat);

  auto* sub = app.add_subcommand("subset", "One-pass subset selection from a large CSV");
  sub->add_option("--in", o.in, "Input CSV (\"-\" for stdin, then --total is required)");
  sub->add_option("--n", o.n, "Subset size")->required();
  sub->add_option("--segment", o.segment, "Records per segment");
  auto* sub_total = sub->add_option("--total", o.total, "Record count, if known");
  auto* sub_dim = sub->add_option("--dim", o.dim, "Record width for stdin input");
  auto* sub_seed = sub->add_option("--seed", o.seed, "64-bit seed");
  sub->add_option("--out", o.out, "Output file (default stdout)");
  add_bounds(sub);

  auto* exp = app.add_subcommand("expand", "Move a sample set into a new domain");
  exp->add_option("--in", o.in, "Existing samples (default stdin)");
  exp->add_option("--new-lower", o.new_lower, "New lower bounds")->required();
  exp->add_option("--new-upper", o.new_upper, "New upper bounds")->required();
  exp->add_option("--add", o.add, "Number of points to add");
  exp->add_option("--algo", o.algo, "random, greedyfp, bc or hybrid (default bc)");
  exp->add_option("--params", o.params, "Algorithm parameters k=v[,k=v...]");
  exp->add_option("--candidates", o.candidates, "new (added region only) or whole");
  auto* exp_seed = exp->add_option("--seed", o.seed, "64-bit seed");
  exp->add_option("--out", o.out, "Output file (default stdout)");
  add_bounds(exp);

  auto* app_region = app.add_subcommand("append-region", "Densify around anchor points");
  app_region->add_option("--anchors", o.anchors, "Anchor CSV")->required();
  app_region->add_option("--halfwidth", o.halfwidth, "Half-width as a fraction of |coordinate|");
  app_region->add_option("--cands-per-anchor", o.cands_per_anchor, "Candidates per anchor");
  app_region->add_option("--n", o.n, "Points to select")->required();
  app_region->add_flag("--include-anchors", o.include_anchors,
                       "Measure candidates against the anchors too");
  auto* region_seed = app_region->add_option("--seed", o.seed, "64-bit seed");
  app_region->add_option("--out", o.out, "Output file (default stdout)");
  add_bounds(app_region);

  auto* bench = app.add_subcommand("bench", "Run comparison experiments");
  auto* bench_suite = bench->add_option("--suite", o.suite, "Built-in suite: paper");
  auto* bench_spec = bench->add_option("--spec", o.spec, "JSON experiment spec");
  bench_suite->excludes(bench_spec);
  bench->add_option("--out", o.out, "Output directory")->required();
  bench->add_option("--format", o.format, "table, csv, json or all");
  auto* bench_reps = bench->add_option("--reps-override", o.reps_override, "Repetitions");
  bench->add_flag("--save-sets", o.save_sets, "Also write every generated set as CSV");
  bench->add_flag("--no-timing", o.no_timing, "Leave wall times out of the reports");
  auto* bench_seed = bench->add_option("--seed-base", o.seed_base, "Override the seed base");

  auto* plot = app.add_subcommand("plot", "SVG scatter of a 2D projection");
  plot->add_option("--in", o.in, "Input CSV (default stdin)");
  plot->add_option("--out", o.out, "Output SVG (default stdout)");
  plot->add_option("--dims", o.dims, "Projected dimensions i,j");
  auto* plot_split = plot->add_option("--split", o.split, "Color points from index k on");
  add_bounds(plot);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      GenerateConfig cfg;
      if (!o.config.empty()) load_config(o.config, cfg);
      if (!o.algo.empty()) cfg.algorithm = o.algo;
      if (gen_dim->count()) cfg.dim = o.dim;
      if (gen_n->count()) cfg.n = o.n;
      if (gen_seed->count()) cfg.seed = o.seed;
      if (gen_lat->count()) cfg.latinize = o.latinize;
      if (gen_density->count()) cfg.density = o.density;
      if (gen_viab->count()) cfg.viability = o.viability;
      if (!o.lower.empty()) cfg.lower = parse_list(o.lower, "--lower");
      if (!o.upper.empty()) cfg.upper = parse_list(o.upper, "--upper");
      cfg.params.add_flags(o.params);
      const std::uint64_t seed =
          cfg.seed ? *cfg.seed : resolve_seed(nullptr, 0);
      const SampleSet set = generate_set(cfg, seed);
      write_output(o.out, out, to_csv(set));
      return kExitOk;
    }

    if (score->parsed()) {
      Input input(o.in, in);
      const CsvTable table = read_csv(input.get());
      const std::size_t dim = table.rows.front().size();
      SampleSet set(Domain::unit(dim));
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (double v : table.rows[i]) {
          if (!(v >= 0.0 && v <= 1.0)) {
            throw CsvError(table.lines[i], "coordinate outside [0,1]");
          }
        }
        set.append(table.rows[i]);
      }
      QualityReport q;
      try {
        q = quality_report(set, o.p);
      } catch (const DuplicatePoints& e) {
        throw ConfigError("duplicate points: rows " + std::to_string(e.first()) + " and " +
                          std::to_string(e.second()) + " (lines " +
                          std::to_string(table.lines[e.first()]) + " and " +
                          std::to_string(table.lines[e.second()]) + ")");
      }
      json j;
      j["schemaVersion"] = 1;
      j["n"] = q.n;
      j["d"] = q.d;
      j["nnMin"] = q.nn_min;
      j["nnAvg"] = q.nn_avg;
      j["nnMax"] = q.nn_max;
      j["p"] = q.p;
      j["phiP"] = q.phi_p;
      j["cl2"] = q.cl2;
      out << j.dump(2) << '\n';
      return kExitOk;
    }

    if (lat->parsed()) {
      const SampleSet set = read_points(o.in, in, bounds(o.lower, "--lower"), bounds(o.upper, "--upper"));
      Rng rng(resolve_seed(lat_seed, o.seed));
      write_output(o.out, out, to_csv(latinize(set, rng)));
      return kExitOk;
    }

    if (sub->parsed()) {
      std::unique_ptr<CsvRecordSource> source;
      if (o.in.empty() || o.in == "-") {
        if (!sub_total->count()) throw ConfigError("reading stdin needs --total");
        source = std::make_unique<CsvRecordSource>(in, o.total);
      } else {
        source = std::make_unique<CsvRecordSource>(o.in);
      }
      const std::vector<double> lower = bounds(o.lower, "--lower");
      const std::vector<double> upper = bounds(o.upper, "--upper");
      std::size_t dim = sub_dim->count() ? o.dim : lower.size();
      if (dim == 0) dim = source->width_hint().value_or(0);
      if (dim == 0) throw ConfigError("cannot tell the record width; pass --dim");
      const Domain domain = make_domain(dim, lower, upper);
      StreamConfig sc;
      sc.segment_size = o.segment;
      sc.subset_size = o.n;
      if (sub_total->count()) sc.total_records = o.total;
      Rng rng(resolve_seed(sub_seed, o.seed));
      RecordSource& reader =
          hooks.wrap_subset_source ? hooks.wrap_subset_source(*source) : *source;
      write_output(o.out, out, to_csv(stream_subset(reader, domain, sc, rng)));
      return kExitOk;
    }

    if (exp->parsed()) {
      const SampleSet set = read_points(o.in, in, bounds(o.lower, "--lower"), bounds(o.upper, "--upper"));
      const Domain new_domain(parse_list(o.new_lower, "--new-lower"),
                              parse_list(o.new_upper, "--new-upper"));
      AlgorithmConfig ac;
      const std::string algo = o.algo.empty() ? "bc" : o.algo;
      ac.algorithm = adapt_algorithm(algo);
      Params p;
      p.add_flags(o.params);
      ac.fp = fp_params(algo, p, fp_defaults(algo));
      p.finish(algo);
      ExpandCandidates mode;
      if (o.candidates == "new") {
        mode = ExpandCandidates::NewRegionOnly;
      } else if (o.candidates == "whole") {
        mode = ExpandCandidates::WholeDomain;
      } else {
        throw ConfigError("--candidates must be new or whole");
      }
      // Shrinking draws nothing, so it needs no seed.
      const bool draws = o.add > 0 && !set.domain().box_contains(new_domain);
      Rng rng(draws ? resolve_seed(exp_seed, o.seed) : 0);
      write_output(o.out, out, to_csv(expand_domain(set, new_domain, o.add, ac, rng, mode)));
      return kExitOk;
    }

    if (app_region->parsed()) {
      CurveRegionSpec spec{read_points(o.anchors, in, bounds(o.lower, "--lower"),
                                       bounds(o.upper, "--upper"))};
      spec.half_width_fraction = o.halfwidth;
      spec.candidates_per_anchor = o.cands_per_anchor;
      spec.include_anchors = o.include_anchors;
      Rng rng(resolve_seed(region_seed, o.seed));
      write_output(o.out, out, to_csv(curve_region_sample(spec, o.n, rng)));
      return kExitOk;
    }

    if (bench->parsed()) {
      std::vector<ExperimentSpec> specs;
      if (!o.spec.empty()) {
        specs = load_bench_specs(o.spec);
      } else if (o.suite == "paper") {
        specs = paper_suite();
      } else {
        throw ConfigError("bench needs --suite paper or --spec FILE");
      }
      std::vector<std::pair<ReportFormat, std::string>> formats;
      if (o.format == "table" || o.format == "all") formats.emplace_back(ReportFormat::Table, "txt");
      if (o.format == "csv" || o.format == "all") formats.emplace_back(ReportFormat::Csv, "csv");
      if (o.format == "json" || o.format == "all") formats.emplace_back(ReportFormat::Json, "json");
      if (formats.empty()) throw ConfigError("--format must be table, csv, json or all");
      if (bench_reps->count() && o.reps_override < 1) throw ConfigError("--reps-override must be >= 1");

      namespace fs = std::filesystem;
      fs::create_directories(o.out);
      std::size_t cells = 0, failed = 0;
      for (ExperimentSpec& spec : specs) {
        if (bench_reps->count()) spec.repetitions = o.reps_override;
        if (bench_seed->count()) spec.seed_base = o.seed_base;
        RunOptions ro;
        ro.timing = !o.no_timing;
        ro.keep_sets = o.save_sets;
        const BenchReport report = run_experiment(spec, ro);
        const std::string stem = file_stem(spec.name);
        for (const auto& [fmt, ext] : formats) {
          write_output((fs::path(o.out) / (stem + "." + ext)).string(), out,
                       format_report(report, fmt));
        }
        if (o.save_sets) {
          const fs::path dir = fs::path(o.out) / "sets" / stem;
          fs::create_directories(dir);
          for (const SavedSet& s : report.sets) {
            const std::string file = s.method + "-rep" + std::to_string(s.rep) +
                                     (s.latinized ? "-lat" : "") + ".csv";
            write_output((dir / file).string(), out, to_csv(s.set));
          }
        }
        out << format_report(report, ReportFormat::Table) << '\n';
        for (const CellSummary& c : report.cells) {
          ++cells;
          if (c.failure) ++failed;
        }
      }
      return cells > 0 && failed == cells ? kExitRuntime : kExitOk;
    }

    if (plot->parsed()) {
      Input input(o.in, in);
      const CsvTable table = read_csv(input.get());
      const std::size_t dim = table.rows.front().size();
      std::vector<double> lower = bounds(o.lower, "--lower");
      std::vector<double> upper = bounds(o.upper, "--upper");
      if (lower.empty() && upper.empty()) {
        // Unit cube when the data fits, else the data's bounding box.
        lower.assign(dim, 0.0);
        upper.assign(dim, 1.0);
        for (const Point& r : table.rows) {
          for (std::size_t k = 0; k < dim; ++k) {
            lower[k] = std::min(lower[k], r[k]);
            upper[k] = std::max(upper[k], r[k]);
          }
        }
      }
      const Domain domain = make_domain(dim, lower, upper);
      SampleSet set(domain);
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() != dim || !domain.in_box(table.rows[i])) {
          throw CsvError(table.lines[i], "point lies outside the plot bounds");
        }
        set.append(table.rows[i]);
      }
      const std::vector<double> d = parse_list(o.dims, "--dims");
      if (d.size() != 2 || d[0] < 0 || d[1] < 0 || d[0] != std::floor(d[0]) ||
          d[1] != std::floor(d[1])) {
        throw ConfigError("--dims needs two indices i,j");
      }
      PlotOptions po;
      po.dim_x = static_cast<std::size_t>(d[0]);
      po.dim_y = static_cast<std::size_t>(d[1]);
      if (plot_split->count()) po.split = o.split;
      write_output(o.out, out, render_svg(set, po));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace spacefill::cli
