#pragma once

// Serialization: spectrum samples (CSV and JSON lines), histograms, kernel
// grids, StatReports as JSON, and gnuplot scripts referencing CSV output.
// Numbers are written with 17 significant digits so binary64 values
// round-trip exactly.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ensembles.hpp"
#include "stats.hpp"

namespace symrmt::io {

inline constexpr std::string_view schema_line = "# schema-version: 1";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("not a number: '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view s) {
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("not an integer: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t k = line.find(sep, start);
    out.push_back(line.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

// ---------------------------------------------------------------- samples

// One draw.  seed is the master seed of the run; draw i of a run used
// substream(seed, i).
struct SampleRow {
  Family family = Family::AIII;
  int R = 0;
  int L = 0;
  std::uint64_t seed = 0;
  std::vector<double> thetas;
  int forced = 0;

  bool operator==(const SampleRow&) const = default;
};

inline std::vector<SampleRow> to_rows(const EnsembleSpec& spec, std::uint64_t seed,
                                      const std::vector<SpectrumSample>& draws) {
  std::vector<SampleRow> rows;
  rows.reserve(draws.size());
  for (const auto& d : draws) {
    std::vector<double> th = d.thetas;
    std::sort(th.begin(), th.end());
    rows.push_back({spec.family, spec.R, spec.L, seed, std::move(th), d.forced});
  }
  return rows;
}

inline std::string samples_header(int R) {
  std::string h = "family,R,L,seed";
  for (int k = 1; k <= R; ++k) h += ",theta_" + std::to_string(k);
  return h + ",forced";
}

inline void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("write_samples_csv: no rows");
  os << schema_line << '\n' << samples_header(rows.front().R) << '\n';
  for (const auto& r : rows) {
    if (r.R != rows.front().R || static_cast<int>(r.thetas.size()) != r.R)
      throw std::invalid_argument("write_samples_csv: rows must share one rank");
    os << to_string(r.family) << ',' << r.R << ',' << r.L << ',' << r.seed;
    for (double t : r.thetas) os << ',' << format_double(t);
    os << ',' << r.forced << '\n';
  }
}

inline nlohmann::json to_json(const SampleRow& r) {
  return {{"family", to_string(r.family)}, {"R", r.R}, {"L", r.L}, {"seed", r.seed}, {"theta", r.thetas},
          {"forced", r.forced}};
}

inline void write_samples_jsonl(std::ostream& os, const std::vector<SampleRow>& rows) {
  for (const auto& r : rows) os << to_json(r).dump() << '\n';
}

inline SampleRow row_from_json(const nlohmann::json& j) {
  SampleRow r;
  r.family = parse_family(j.at("family").get<std::string>());
  r.R = j.at("R").get<int>();
  r.L = j.at("L").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.thetas = j.at("theta").get<std::vector<double>>();
  r.forced = j.at("forced").get<int>();
  if (static_cast<int>(r.thetas.size()) != r.R) throw std::runtime_error("sample row: theta count differs from R");
  return r;
}

// Reads CSV (leading schema comment) or JSON lines, detected from the first
// non-blank character.
inline std::vector<SampleRow> read_samples(std::istream& is, const std::string& source = "input") {
  std::vector<SampleRow> rows;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error(source + ":" + std::to_string(lineno) + ": " + what);
  };
  bool csv = false, jsonl = false, header = false;
  int R = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!csv && !jsonl) {
      if (line.front() == '{') {
        jsonl = true;
      } else if (line == schema_line) {
        csv = true;
        continue;
      } else {
        fail("expected '" + std::string(schema_line) + "' or a JSON object");
      }
    }
    if (jsonl) {
      try {
        rows.push_back(row_from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        fail(e.what());
      }
      continue;
    }
    if (line.front() == '#') continue;
    const auto f = split(line);
    if (!header) {
      if (f.size() < 6 || f[0] != "family") fail("bad header");
      R = static_cast<int>(f.size()) - 5;
      if (line != samples_header(R)) fail("bad header");
      header = true;
      continue;
    }
    if (static_cast<int>(f.size()) != R + 5) fail("expected " + std::to_string(R + 5) + " fields");
    try {
      SampleRow r;
      r.family = parse_family(std::string(f[0]));
      r.R = parse_int<int>(f[1]);
      r.L = parse_int<int>(f[2]);
      r.seed = parse_int<std::uint64_t>(f[3]);
      for (int k = 0; k < R; ++k) r.thetas.push_back(parse_double(f[4 + k]));
      r.forced = parse_int<int>(f[4 + R]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      fail(e.what());
    }
    if (rows.back().R != R) fail("R column differs from header");
  }
  if (csv && !header) fail("missing header");
  return rows;
}

// ---------------------------------------------------------------- tables

// Named numeric columns, written as CSV or as one JSON object per row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline void write_table(std::ostream& os, const Table& t, const std::string& format) {
  for (const auto& r : t.rows)
    if (r.size() != t.columns.size()) throw std::invalid_argument("write_table: row width differs from header");
  if (format == "csv") {
    os << schema_line << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_double(r[c]);
      os << '\n';
    }
  } else if (format == "jsonl") {
    for (const auto& r : t.rows) {
      nlohmann::ordered_json j;
      for (std::size_t c = 0; c < r.size(); ++c) j[t.columns[c]] = r[c];
      os << j.dump() << '\n';
    }
  } else {
    throw std::invalid_argument("unknown format '" + format + "' (expected csv or jsonl)");
  }
}

// Reads a table written by write_table in CSV form.
inline Table read_table_csv(std::istream& is, const std::string& source = "input") {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  bool schema = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!schema) {
      if (line != schema_line) throw std::runtime_error(source + ":" + std::to_string(lineno) + ": missing schema line");
      schema = true;
      continue;
    }
    if (line.front() == '#') continue;
    const auto f = split(line);
    if (t.columns.empty()) {
      for (auto c : f) t.columns.emplace_back(c);
      continue;
    }
    if (f.size() != t.columns.size())
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": wrong number of fields");
    std::vector<double> row;
    for (auto v : f) row.push_back(parse_double(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// bin_left, bin_right, density and optionally a reference column.
inline Table histogram_table(const Histogram& h, const std::optional<std::vector<double>>& reference = std::nullopt) {
  if (reference && reference->size() != h.bins())
    throw std::invalid_argument("histogram_table: reference column has the wrong length");
  Table t{{"bin_left", "bin_right", "density"}, {}};
  if (reference) t.columns.push_back("reference");
  for (std::size_t i = 0; i < h.bins(); ++i) {
    t.rows.push_back({h.left(i), h.right(i), h.density[i]});
    if (reference) t.rows.back().push_back((*reference)[i]);
  }
  return t;
}

inline Table scalar_grid_table(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::function<double(double, double)>& k) {
  Table t{{"xi", "eta", "K"}, {}};
  for (double x : xs)
    for (double y : ys) t.rows.push_back({x, y, k(x, y)});
  return t;
}

inline Table block_grid_table(const std::vector<double>& xs, const std::vector<double>& ys, const MatrixKernel& k) {
  Table t{{"xi", "eta", "S", "I_minus_eps", "D", "S_T"}, {}};
  for (double x : xs)
    for (double y : ys) {
      const KernelBlock b = k(x, y);
      t.rows.push_back({x, y, b.S, b.Iminus, b.D, b.ST});
    }
  return t;
}

// ---------------------------------------------------------------- reports

inline nlohmann::json to_json(const StatReport& r) {
  return {{"test_name", r.test_name}, {"metric", r.metric}, {"value", r.value}, {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

// ---------------------------------------------------------------- plots

// gnuplot script plotting columns of a CSV written by this module.
inline void write_gnuplot_script(std::ostream& os, const std::string& csv_path, const std::string& kind) {
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n";
  if (kind == "histogram") {
    os << "set style fill solid 0.4\n"
       << "plot '" << csv_path << "' using (($1+$2)/2):3:($2-$1) with boxes, \\\n"
       << "     '' using (($1+$2)/2):4 with lines lw 2\n";
  } else if (kind == "histogram-noref") {
    os << "set style fill solid 0.4\n"
       << "plot '" << csv_path << "' using (($1+$2)/2):3:($2-$1) with boxes\n";
  } else if (kind == "grid") {
    os << "set view map\n"
       << "splot '" << csv_path << "' using 1:2:3 with points palette pt 5\n";
  } else if (kind == "samples") {
    os << "set xlabel 'theta'\n"
       << "plot '" << csv_path << "' using 5:(1) smooth kdensity title 'theta_1'\n";
  } else {
    throw std::invalid_argument("write_gnuplot_script: unknown plot kind '" + kind + "'");
  }
}

}  // namespace symrmt::io
