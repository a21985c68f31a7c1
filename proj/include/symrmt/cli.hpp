#pragma once

// Command-line front end: sample | density | kernel | correlate | verify.
// Precedence of settings: flags, then a flat key=value config file, then
// defaults.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ensembles.hpp"
#include "io.hpp"
#include "kernels_finite.hpp"
#include "kernels_limit.hpp"
#include "qdet.hpp"
#include "stats.hpp"
#include "verify.hpp"

namespace symrmt::cli {

// Bad invocation: message plus exit code (0 for --help).
struct UsageError : std::runtime_error {
  int code;
  UsageError(const std::string& what, int code = 2) : std::runtime_error(what), code(code) {}
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> points() const {
    std::vector<double> p;
    const auto n = static_cast<long>(std::floor((max - min) / step + 1e-9));
    for (long k = 0; k <= n; ++k) p.push_back(min + step * static_cast<double>(k));
    return p;
  }
};

// "min:max:step"
inline GridSpec parse_grid(const std::string& s) {
  const auto f = io::split(s, ':');
  if (f.size() != 3) throw UsageError("grid '" + s + "' must be min:max:step");
  GridSpec g;
  try {
    g = {io::parse_double(f[0]), io::parse_double(f[1]), io::parse_double(f[2])};
  } catch (const std::runtime_error&) {
    throw UsageError("grid '" + s + "' must be min:max:step with numeric fields");
  }
  if (!(g.step > 0.0) || !(g.max >= g.min)) throw UsageError("grid '" + s + "' needs step > 0 and max >= min");
  if ((g.max - g.min) / g.step > 1e6) throw UsageError("grid '" + s + "' has more than 10^6 points");
  return g;
}

inline std::vector<double> parse_points(const std::string& s) {
  std::vector<double> p;
  for (auto f : io::split(s, ',')) {
    try {
      p.push_back(io::parse_double(f));
    } catch (const std::runtime_error&) {
      throw UsageError("points '" + s + "' must be a comma-separated list of numbers");
    }
  }
  return p;
}

struct RunConfig {
  std::string command;
  std::optional<Family> family;
  int R = 0;
  int L = 0;
  int beta = 2;
  double a = 0.0;
  double b = 0.0;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  std::optional<GridSpec> grid;
  std::optional<GridSpec> grid_eta;
  std::string out;  // empty: stdout
  std::string format = "csv";
  bool emit_plot_script = false;
  unsigned threads = 0;  // 0: all cores

  // sample
  std::string method = "matrix";  // matrix | mcmc
  std::size_t burn_in = 2000;
  // kernel, correlate
  std::string limit;  // empty: finite R
  std::optional<Regime> regime;
  double z_o = 0.0;
  std::vector<double> points;
  // density
  std::string input = "-";
  std::string reference = "none";  // none | uniform | arcsine | edge
  std::string variable;            // x | theta | xi
  std::size_t bins = 50;
  std::optional<GridSpec> range;   // step unused
  double tolerance = 0.01;
  // verify
  std::string suite = "smoke";
  std::vector<int> gates;
};

namespace detail {

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::string params_string(const JacobiParams& p) {
  std::ostringstream s;
  s << "(beta,a,b) = (" << p.beta << "," << p.a << "," << p.b << ")";
  return s.str();
}

}  // namespace detail

inline const char* usage_text() {
  return "usage: symrmt <command> [options]\n"
         "commands:\n"
         "  sample     draw spectra of a symmetric-space ensemble (matrix model or MCMC)\n"
         "  density    histogram of sampled levels with a reference curve\n"
         "  kernel     evaluate a finite or limiting correlation kernel on a grid\n"
         "  correlate  n-level correlation at listed points\n"
         "  verify     run the acceptance suite and write a JSON report\n"
         "run 'symrmt <command> --help' for options\n";
}

// Parses argv (argv[0] is the program name).  Throws UsageError.
inline RunConfig parse_config(const std::vector<std::string>& argv) {
  if (argv.size() <= 1) throw UsageError(usage_text(), 2);

  RunConfig c;
  CLI::App app{"symrmt: random matrix ensembles of symmetric spaces", "symrmt"};
  app.require_subcommand(1);
  std::string config_path, family, grid, grid_eta, regime, range, points;
  app.add_option("--config", config_path, "flat key=value file; flags take precedence");

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "master seed (u64)");
    s->add_option("--threads", c.threads, "worker threads, 0 = all cores");
    s->add_option("--out", c.out, "output path (default stdout)");
    s->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    s->add_flag("--plot", c.emit_plot_script, "write a gnuplot script next to --out");
  };
  auto params = [&](CLI::App* s) {
    s->add_option("--family", family, "ensemble family; fills (beta, a, b)");
    s->add_option("--beta", c.beta, "1, 2 or 4");
    s->add_option("--a", c.a, "exponent at +1");
    s->add_option("--b", c.b, "exponent at -1");
  };

  CLI::App* sample = app.add_subcommand("sample", "draw spectra");
  common(sample);
  params(sample);
  sample->add_option("--rank,-R", c.R, "rank R (required)");
  sample->add_option("--L", c.L, "offset L (D III: N = 2R + L)");
  sample->add_option("--count", c.n_samples, "number of draws");
  sample->add_option("--method", c.method, "matrix or mcmc")->check(CLI::IsMember({"matrix", "mcmc"}));
  sample->add_option("--burn-in", c.burn_in, "MCMC burn-in sweeps");

  CLI::App* density = app.add_subcommand("density", "histogram of sampled levels");
  common(density);
  density->add_option("--in", c.input, "samples file, '-' for stdin");
  density->add_option("--bins", c.bins, "number of bins");
  density->add_option("--reference", c.reference, "none, uniform, arcsine or edge")
      ->check(CLI::IsMember({"none", "uniform", "arcsine", "edge"}));
  density->add_option("--variable", c.variable, "x, theta or xi (+1 edge)")
      ->check(CLI::IsMember({"x", "theta", "xi"}));
  density->add_option("--range", range, "lo:hi histogram range");
  density->add_option("--tolerance", c.tolerance, "KS tolerance for the report");

  CLI::App* kernel = app.add_subcommand("kernel", "evaluate a kernel on a grid");
  CLI::App* correlate = app.add_subcommand("correlate", "n-level correlation");
  for (CLI::App* s : {kernel, correlate}) {
    common(s);
    params(s);
    s->add_option("--limit", c.limit, "sine or bessel; omit for finite R")
        ->check(CLI::IsMember({"sine", "bessel"}));
    s->add_option("--rank,-R", c.R, "rank R of the finite kernel");
    s->add_option("--regime", regime, "bulk, edge+ or edge-: evaluate the finite kernel in local coordinates");
    s->add_option("--center", c.z_o, "bulk center z_o in (-1, 1)");
  }
  kernel->add_option("--grid", grid, "min:max:step for both variables (required)");
  kernel->add_option("--grid-eta", grid_eta, "min:max:step for the second variable");
  correlate->add_option("--points", points, "comma-separated points (required)");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  common(verify);
  verify->add_option("--suite", c.suite, "smoke or full")->check(CLI::IsMember({"smoke", "full"}));
  verify->add_option("--gate", c.gates, "run only these gates (1-12)")->check(CLI::Range(1, 12));

  std::vector<std::string> args(argv.begin() + 1, argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string("error: ") + e.what() + "\nrun 'symrmt --help' for usage", 2);
  }
  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();

  // config file values fill options the command line left unset
  if (!config_path.empty()) {
    for (const auto& [key, value] : detail::read_config_file(config_path)) {
      CLI::Option* opt = sub->get_option_no_throw("--" + key);
      if (!opt) throw UsageError("config file '" + config_path + "': unknown key '" + key + "' for " + c.command);
      if (opt->count() > 0) continue;
      try {
        opt->add_result(value);
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw UsageError("config file '" + config_path + "': " + key + ": " + e.what());
      }
    }
  }
  auto given = [&](const std::string& name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o && o->count() > 0;
  };

  if (!grid.empty()) c.grid = parse_grid(grid);
  if (!grid_eta.empty()) c.grid_eta = parse_grid(grid_eta);
  if (!range.empty()) {
    const auto r = io::split(range, ':');
    try {
      if (r.size() != 2) throw std::runtime_error("fields");
      c.range = GridSpec{io::parse_double(r[0]), io::parse_double(r[1]), 1.0};
    } catch (const std::runtime_error&) {
      throw UsageError("range '" + range + "' must be lo:hi");
    }
    if (!(c.range->max > c.range->min)) throw UsageError("range '" + range + "' needs hi > lo");
  }
  if (!points.empty()) c.points = parse_points(points);
  if (!regime.empty()) {
    try {
      c.regime = parse_regime(regime);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  // parameter closure: a family fixes (beta, a, b)
  if (!family.empty()) {
    try {
      c.family = parse_family(family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (c.command != "sample") {
      EnsembleSpec spec{*c.family, std::max(c.R, 1), c.L};
      JacobiParams p;
      try {
        p = table_params(spec);
      } catch (const circular_ensemble_error& e) {
        throw UsageError(std::string(e.what()) + "; give --beta/--a/--b instead");
      }
      for (const char* o : {"--beta", "--a", "--b"})
        if (given(o))
          throw UsageError(std::string(o) + " conflicts with --family " + family + ", which fixes " +
                           detail::params_string(p) + "; drop " + o + " or --family");
      c.beta = static_cast<int>(p.beta);
      c.a = p.a;
      c.b = p.b;
    }
  }

  if (c.command == "sample") {
    if (!c.family) throw UsageError("sample: --family is required");
    if (!given("--rank")) throw UsageError("sample: --rank is required");
    for (const char* o : {"--beta", "--a", "--b"})
      if (given(o))
        throw UsageError(std::string(o) + " conflicts with --family " + family +
                         ": sampled ensembles take (beta, a, b) from the family table");
    const EnsembleSpec spec{*c.family, c.R, c.L};
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("sample: ") + e.what());
    }
    if (spec.circular()) {
      if (c.method == "mcmc") throw UsageError("sample: --method mcmc needs a family with Jacobi parameters");
      c.beta = circular_beta(spec);
    } else {
      const JacobiParams p = table_params(spec);
      c.beta = static_cast<int>(p.beta);
      c.a = p.a;
      c.b = p.b;
    }
    if (c.n_samples == 0) throw UsageError("sample: --count must be positive");
  }
  if (c.command == "kernel" || c.command == "correlate") {
    if (c.beta != 1 && c.beta != 2 && c.beta != 4) throw UsageError(c.command + ": --beta must be 1, 2 or 4");
    if (c.limit.empty() && c.R < 1) throw UsageError(c.command + ": a finite kernel needs --rank >= 1 (or give --limit)");
    if (!c.limit.empty() && (given("--rank") || c.regime))
      throw UsageError(c.command + ": --rank and --regime apply to finite kernels only");
    if (c.limit == "bessel" && !(c.a > -1.0)) throw UsageError(c.command + ": --a must exceed -1");
    if (c.limit.empty() && (!(c.a > -1.0) || !(c.b > -1.0)))
      throw UsageError(c.command + ": --a and --b must exceed -1");
    if (c.regime == Regime::hard_edge_plus) c.z_o = 1.0;
    if (c.regime == Regime::hard_edge_minus) c.z_o = -1.0;
    if (c.regime == Regime::bulk && !(std::abs(c.z_o) < 1.0)) throw UsageError(c.command + ": --center must lie in (-1, 1)");
  }
  if (c.command == "correlate" && c.points.empty()) throw UsageError("correlate: --points is required");
  if (c.command == "kernel" && !c.grid) throw UsageError("kernel: --grid min:max:step is required");
  if (c.command == "density" && c.bins < 2) throw UsageError("density: --bins must be at least 2");
  if (c.emit_plot_script && c.out.empty()) throw UsageError("--plot needs --out (the script references the data file)");
  return c;
}

namespace detail {

// Writes to --out or stdout; the path is named in I/O errors.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path), os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw std::runtime_error("write failed on '" + (path_.empty() ? std::string("stdout") : path_) + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_;
};

inline void write_plot(const RunConfig& c, const std::string& kind) {
  if (!c.emit_plot_script) return;
  const std::string path = c.out + ".gp";
  std::ofstream gp(path);
  if (!gp) throw std::runtime_error("cannot open '" + path + "' for writing");
  io::write_gnuplot_script(gp, c.out, kind);
  if (!gp) throw std::runtime_error("write failed on '" + path + "'");
}

inline int run_sample(const RunConfig& c, std::ostream& out) {
  const EnsembleSpec spec{*c.family, c.R, c.L};
  std::vector<io::SampleRow> rows;
  if (c.method == "matrix") {
    rows = io::to_rows(spec, c.seed, sample_spectra(spec, c.n_samples, c.seed, c.threads));
  } else {
    Rng rng = substream(c.seed, 0);
    const McmcResult m = mcmc_jacobi(c.R, c.beta, c.a, c.b, c.n_samples, c.burn_in, rng);
    for (const auto& xs : m.samples) {
      std::vector<double> th;
      for (double x : xs) th.push_back(std::acos(std::clamp(x, -1.0, 1.0)));
      std::sort(th.begin(), th.end());
      rows.push_back({spec.family, spec.R, spec.L, c.seed, std::move(th), spec.forced()});
    }
  }
  Output o(c.out, out);
  if (c.format == "csv")
    io::write_samples_csv(o.stream(), rows);
  else
    io::write_samples_jsonl(o.stream(), rows);
  o.finish();
  if (c.format == "csv") write_plot(c, "samples");
  return 0;
}

inline int run_density(const RunConfig& c, std::ostream& out, std::istream& in, std::ostream& err) {
  std::vector<io::SampleRow> rows;
  if (c.input == "-") {
    rows = io::read_samples(in, "stdin");
  } else {
    std::ifstream f(c.input);
    if (!f) throw std::runtime_error("cannot open '" + c.input + "' for reading");
    rows = io::read_samples(f, c.input);
  }
  if (rows.empty()) throw std::runtime_error("no samples in '" + c.input + "'");
  const EnsembleSpec spec{rows.front().family, rows.front().R, rows.front().L};
  for (const auto& r : rows)
    if (r.family != spec.family || r.R != spec.R || r.L != spec.L)
      throw std::runtime_error("'" + c.input + "' mixes ensembles; density needs a single one");

  const std::string var = !c.variable.empty() ? c.variable : (c.reference == "edge" ? "xi" : (spec.circular() ? "theta" : "x"));
  if (c.reference == "edge" && var != "xi") throw std::runtime_error("--reference edge needs --variable xi");
  if (c.reference == "arcsine" && var != "x") throw std::runtime_error("--reference arcsine needs --variable x");
  if (var != "theta" && spec.circular())
    throw std::runtime_error(to_string(spec.family) + " is circular: use --variable theta");

  double lo = 0.0, hi = 0.0;
  std::vector<double> values;
  for (const auto& r : rows) {
    if (var == "x") {
      for (double t : r.thetas) values.push_back(std::cos(t));
    } else if (var == "theta") {
      values.insert(values.end(), r.thetas.begin(), r.thetas.end());
    } else {
      for (double x : rescale_levels(r.thetas, Regime::hard_edge_plus, 1.0, r.R)) values.push_back(x);
    }
  }
  if (var == "x") {
    lo = -1.0;
    hi = 1.0;
  } else if (var == "theta") {
    hi = spec.circular() ? 2.0 * pi : pi;
  } else {
    hi = 3.0;
  }
  if (c.range) {
    lo = c.range->min;
    hi = c.range->max;
  }
  std::vector<double> inside;
  for (double v : values)
    if (v >= lo && v <= hi && (var != "xi" || v > 0.0)) inside.push_back(v);
  if (inside.empty()) throw std::runtime_error("no levels inside the histogram range");
  const Histogram h = empirical_density(inside, c.bins, lo, hi);

  std::optional<std::function<double(double)>> pdf, cdf;
  if (c.reference == "uniform") {
    pdf = [lo, hi](double) { return 1.0 / (hi - lo); };
    cdf = [lo, hi](double x) { return uniform_cdf(lo, hi, x); };
  } else if (c.reference == "arcsine") {
    const double mass = arcsine_cdf(hi) - arcsine_cdf(lo);
    pdf = [mass](double x) { return std::abs(x) < 1.0 ? 1.0 / (pi * std::sqrt(1.0 - x * x)) / mass : 0.0; };
    cdf = [lo, mass](double x) { return (arcsine_cdf(x) - arcsine_cdf(lo)) / mass; };
  } else if (c.reference == "edge") {
    const JacobiParams p = table_params(spec);
    const int beta = static_cast<int>(p.beta);
    const double a = p.a;
    auto rho = [beta, a](double x) { return x <= 0.0 ? 0.0 : edge_density(beta, a, x); };
    auto tab = std::make_shared<TabulatedCdf>(rho, lo, hi, 3000);
    const double mass = integrate_panels(rho, std::max(lo, 0.0), hi, 0.25, 1e-10);
    pdf = [rho, mass](double x) { return rho(x) / mass; };
    cdf = [tab](double x) { return (*tab)(x); };
  }

  std::optional<std::vector<double>> ref;
  if (pdf) {
    // bin averages of the reference density
    ref.emplace();
    for (std::size_t i = 0; i < h.bins(); ++i) {
      const double l = h.left(i), r = h.right(i);
      ref->push_back(c.reference == "edge"
                         ? integrate_panels(*pdf, std::max(l, 1e-12), r, 0.05, 1e-10) / (r - l)
                         : ((*cdf)(r) - (*cdf)(l)) / (r - l));
    }
  }
  Output o(c.out, out);
  io::write_table(o.stream(), io::histogram_table(h, ref), c.format);
  o.finish();
  if (c.format == "csv") write_plot(c, ref ? "histogram" : "histogram-noref");

  if (cdf) {
    StatReport r = StatReport::gate(to_string(spec.family) + " R=" + std::to_string(spec.R) + " " + var + " vs " +
                                        c.reference,
                                    "ks_distance", ks_distance(inside, *cdf), c.tolerance);
    err << io::to_json(r).dump() << '\n';
  }
  return 0;
}

struct KernelChoice {
  bool scalar = true;  // beta = 2
  std::function<double(double, double)> k;
  MatrixKernel m;
};

inline KernelChoice choose_kernel(const RunConfig& c) {
  KernelChoice kc;
  kc.scalar = c.beta == 2;
  if (!c.limit.empty()) {
    const LimitKernelSpec spec{c.beta, c.limit == "sine" ? Regime::bulk : Regime::hard_edge_plus, c.a, c.b};
    if (kc.scalar)
      kc.k = limit_scalar_kernel(spec);
    else
      kc.m = limit_matrix_kernel(spec);
    return kc;
  }
  if (kc.scalar) {
    ScalarKernel k = finite_scalar_kernel(c.R, c.a, c.b);
    if (c.regime) k = rescale_scalar_kernel(k, local_change_of_variables(*c.regime, c.z_o, c.R));
    kc.k = k;
  } else {
    MatrixKernel m = finite_matrix_kernel(c.beta, c.R, c.a, c.b);
    if (c.regime) m = rescale_matrix_kernel(m, local_change_of_variables(*c.regime, c.z_o, c.R));
    kc.m = m;
  }
  return kc;
}

inline int run_kernel(const RunConfig& c, std::ostream& out) {
  const KernelChoice kc = choose_kernel(c);
  const std::vector<double> xs = c.grid->points();
  const std::vector<double> ys = c.grid_eta ? c.grid_eta->points() : xs;
  const io::Table t = kc.scalar ? io::scalar_grid_table(xs, ys, kc.k) : io::block_grid_table(xs, ys, kc.m);
  Output o(c.out, out);
  io::write_table(o.stream(), t, c.format);
  o.finish();
  if (c.format == "csv") write_plot(c, "grid");
  return 0;
}

inline int run_correlate(const RunConfig& c, std::ostream& out) {
  const KernelChoice kc = choose_kernel(c);
  const double rho = kc.scalar ? correlation(ScalarKernel(kc.k), c.points) : correlation(kc.m, c.points);
  io::Table t{{"n"}, {{static_cast<double>(c.points.size())}}};
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    t.columns.push_back("x_" + std::to_string(i + 1));
    t.rows[0].push_back(c.points[i]);
  }
  t.columns.push_back("rho");
  t.rows[0].push_back(rho);
  Output o(c.out, out);
  io::write_table(o.stream(), t, c.format);
  o.finish();
  return 0;
}

inline int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  verify::Options opt;
  if (c.seed != 0) opt.seed = c.seed;
  opt.threads = c.threads;
  const std::vector<int> ids = c.gates.empty() ? verify::suite_gates(c.suite) : c.gates;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  bool all = true;
  for (int id : ids) {
    const verify::GateOutcome g = verify::run_gate(id, opt);
    all = all && g.pass;
    char line[200];
    std::snprintf(line, sizeof line, "gate %2d %-4s %7.1fs  %s", g.id, g.pass ? "PASS" : "FAIL", g.seconds,
                  g.name.c_str());
    err << line << (g.error.empty() ? "" : "  error: " + g.error) << '\n';
    for (const auto& r : g.reports) {
      nlohmann::ordered_json j;
      j["test_name"] = "gate " + std::to_string(id) + ": " + r.test_name;
      j["metric"] = r.metric;
      j["value"] = r.value;
      j["tolerance"] = r.tolerance;
      j["pass"] = r.pass;
      reports.push_back(j);
    }
    if (!g.error.empty())
      reports.push_back({{"test_name", "gate " + std::to_string(id) + ": " + g.name},
                         {"metric", "exception: " + g.error},
                         {"value", nullptr},
                         {"tolerance", nullptr},
                         {"pass", false}});
  }
  Output o(c.out, out);
  o.stream() << reports.dump(2) << '\n';
  o.finish();
  return all ? 0 : 1;
}

}  // namespace detail

// Exit code: 0 success, 1 failed verification gate or runtime error.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::istream& in = std::cin,
               std::ostream& err = std::cerr) {
  try {
    if (c.command == "sample") return detail::run_sample(c, out);
    if (c.command == "density") return detail::run_density(c, out, in, err);
    if (c.command == "kernel") return detail::run_kernel(c, out);
    if (c.command == "correlate") return detail::run_correlate(c, out);
    if (c.command == "verify") return detail::run_verify(c, out, err);
    throw std::logic_error("unknown command '" + c.command + "'");
  } catch (const std::exception& e) {
    err << "error: " << c.command << ": " << e.what() << '\n';
    return 1;
  }
}

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::istream& in = std::cin,
                std::ostream& err = std::cerr) {
  RunConfig c;
  try {
    c = parse_config(std::vector<std::string>(argv, argv + argc));
  } catch (const UsageError& e) {
    (e.code == 0 ? out : err) << e.what() << (std::string(e.what()).ends_with('\n') ? "" : "\n");
    return e.code;
  }
  return run(c, out, in, err);
}

}  // namespace symrmt::cli
