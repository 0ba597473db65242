#pragma once

// File formats: data files, test reports, study specifications and study outputs.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gofsim/adjust.hpp"
#include "gofsim/error.hpp"
#include "gofsim/histogram.hpp"
#include "gofsim/model.hpp"
#include "gofsim/statistics.hpp"
#include "gofsim/studies.hpp"

namespace gofsim::io {

using json = nlohmann::ordered_json;

// --- Small text helpers ---------------------------------------------------------

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

inline std::vector<double> parse_double_list(std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) {
    auto v = parse_double(item);
    if (!v) throw invalid_input("not a number: '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

inline std::vector<MethodId> parse_method_list(std::string_view s) {
  std::vector<MethodId> out;
  for (const auto& item : split(s, ','))
    if (!item.empty()) out.push_back(parse_method(item));
  return out;
}

// Shortest text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

// --- Data files -------------------------------------------------------------------

// One number per line, or a histogram: header "edges,counts", then "edge,count"
// rows and a final row holding only the upper edge. Blank lines and lines
// starting with '#' are ignored.
inline Sample parse_data(const std::string& text, const std::string& origin = "data") {
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      lines.emplace_back(no, t);
    }
  }
  if (lines.empty()) throw io_error(origin + ": no data");
  auto where = [&](std::size_t no) { return origin + ":" + std::to_string(no) + ": "; };

  std::string header = lines.front().second;
  header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
  std::transform(header.begin(), header.end(), header.begin(), [](unsigned char c) { return std::tolower(c); });
  if (header == "edges,counts") {
    Histogram h;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto& [no, line] = lines[i];
      auto fields = split(line, ',');
      auto edge = parse_double(fields[0]);
      if (!edge) throw io_error(where(no) + "bad edge '" + fields[0] + "'");
      h.edges.push_back(*edge);
      const bool last = i + 1 == lines.size();
      const bool has_count = fields.size() > 1 && !fields[1].empty();
      if (last && !has_count) break;
      if (!has_count) throw io_error(where(no) + "missing count");
      auto c = parse_double(fields[1]);
      if (!c || *c < 0 || *c != std::floor(*c)) throw io_error(where(no) + "count must be a nonnegative integer");
      h.counts.push_back(static_cast<std::size_t>(*c));
      if (last) throw io_error(where(no) + "histogram needs a final row with the upper edge");
    }
    try {
      validate_histogram(h);
    } catch (const Error& e) {
      throw io_error(origin + ": " + e.what());
    }
    return h;
  }
  std::vector<double> x;
  x.reserve(lines.size());
  for (const auto& [no, line] : lines) {
    auto v = parse_double(line);
    if (!v || !std::isfinite(*v)) throw io_error(where(no) + "not a finite number: '" + line + "'");
    x.push_back(*v);
  }
  return x;
}

inline Sample read_data_file(const std::filesystem::path& path) {
  return parse_data(read_text(path), path.string());
}

inline std::string format_data(const Sample& s) {
  std::string out;
  if (const auto* raw = std::get_if<std::vector<double>>(&s)) {
    for (double v : *raw) out += format_double(v) + "\n";
    return out;
  }
  const auto& h = std::get<Histogram>(s);
  out = "edges,counts\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out += format_double(h.edges[i]) + "," + std::to_string(h.counts[i]) + "\n";
  out += format_double(h.edges.back()) + "\n";
  return out;
}

// --- Test reports -----------------------------------------------------------------

inline json report_to_json(const TestReport& r) {
  json j;
  j["rc"] = r.rc;
  j["min_p"] = r.min_p;
  json p = json::object(), s = json::object();
  for (const auto& [m, v] : r.pvalues) p[std::string(method_name(m))] = v;
  for (const auto& [m, v] : r.statistics) s[std::string(method_name(m))] = v;
  j["pvalues"] = p;
  j["statistics"] = s;
  j["B"] = r.B;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
  j["model"] = {{"family", r.family}, {"params", r.params}, {"estimate", r.estimated}};
  j["nbins"] = r.nbins;
  j["fresh_minp_batch"] = r.fresh_minp_batch;
  j["bin_null_rows"] = r.bin_null_rows;
  json dropped = json::array();
  for (MethodId m : r.dropped) dropped.push_back(std::string(method_name(m)));
  j["dropped"] = dropped;
  return j;
}

inline TestReport report_from_json(const json& j) {
  try {
    TestReport r;
    r.rc = j.at("rc").get<double>();
    r.min_p = j.at("min_p").get<double>();
    for (const auto& [k, v] : j.at("pvalues").items()) r.pvalues[parse_method(k)] = v.get<double>();
    for (const auto& [k, v] : j.at("statistics").items()) r.statistics[parse_method(k)] = v.get<double>();
    r.B = j.at("B").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<std::size_t>();
    if (!j.at("lambda").is_null()) r.lambda = j.at("lambda").get<double>();
    r.family = j.at("model").at("family").get<std::string>();
    r.params = j.at("model").at("params").get<std::vector<double>>();
    r.estimated = j.at("model").at("estimate").get<bool>();
    r.nbins = j.value("nbins", kDefaultBinCount);
    r.fresh_minp_batch = j.value("fresh_minp_batch", false);
    r.bin_null_rows = j.value("bin_null_rows", false);
    if (j.contains("dropped"))
      for (const auto& d : j.at("dropped")) r.dropped.push_back(parse_method(d.get<std::string>()));
    return r;
  } catch (const json::exception& e) {
    throw invalid_input(std::string("report: ") + e.what());
  }
}

// Flat key,value rows; nested keys are dotted ("pvalues.KS").
inline std::string report_to_csv(const TestReport& r) {
  std::string out = "key,value\n";
  auto row = [&](const std::string& k, const std::string& v) { out += k + "," + v + "\n"; };
  row("rc", format_double(r.rc));
  row("min_p", format_double(r.min_p));
  for (const auto& [m, v] : r.pvalues) row("pvalues." + std::string(method_name(m)), format_double(v));
  for (const auto& [m, v] : r.statistics) row("statistics." + std::string(method_name(m)), format_double(v));
  row("B", std::to_string(r.B));
  row("seed", std::to_string(r.seed));
  row("n", std::to_string(r.n));
  row("lambda", r.lambda ? format_double(*r.lambda) : "");
  row("model.family", r.family);
  std::string params;
  for (std::size_t i = 0; i < r.params.size(); ++i) params += (i ? ";" : "") + format_double(r.params[i]);
  row("model.params", params);
  row("model.estimate", r.estimated ? "true" : "false");
  row("nbins", std::to_string(r.nbins));
  row("fresh_minp_batch", r.fresh_minp_batch ? "true" : "false");
  row("bin_null_rows", r.bin_null_rows ? "true" : "false");
  std::string dropped;
  for (std::size_t i = 0; i < r.dropped.size(); ++i) dropped += (i ? ";" : "") + std::string(method_name(r.dropped[i]));
  row("dropped", dropped);
  return out;
}

inline TestReport report_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (trim(line) != "key,value") throw invalid_input("report: missing key,value header");
  TestReport r;
  auto num = [](const std::string& k, const std::string& v) {
    auto d = parse_double(v);
    if (!d) throw invalid_input("report: bad value for " + k);
    return *d;
  };
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw invalid_input("report: malformed row '" + line + "'");
    const std::string k = trim(line.substr(0, comma)), v = trim(line.substr(comma + 1));
    if (k == "rc") r.rc = num(k, v);
    else if (k == "min_p") r.min_p = num(k, v);
    else if (k.starts_with("pvalues.")) r.pvalues[parse_method(k.substr(8))] = num(k, v);
    else if (k.starts_with("statistics.")) r.statistics[parse_method(k.substr(11))] = num(k, v);
    else if (k == "B") r.B = static_cast<std::size_t>(num(k, v));
    else if (k == "seed") r.seed = std::stoull(v);
    else if (k == "n") r.n = static_cast<std::size_t>(num(k, v));
    else if (k == "lambda") { if (!v.empty()) r.lambda = num(k, v); }
    else if (k == "model.family") r.family = v;
    else if (k == "model.params") { for (const auto& p : split(v, ';')) if (!p.empty()) r.params.push_back(num(k, p)); }
    else if (k == "model.estimate") r.estimated = v == "true";
    else if (k == "nbins") r.nbins = static_cast<std::size_t>(num(k, v));
    else if (k == "fresh_minp_batch") r.fresh_minp_batch = v == "true";
    else if (k == "bin_null_rows") r.bin_null_rows = v == "true";
    else if (k == "dropped") { for (const auto& m : split(v, ';')) if (!m.empty()) r.dropped.push_back(parse_method(m)); }
    else throw invalid_input("report: unknown key '" + k + "'");
  }
  return r;
}

inline TestReport read_report(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (trim(text).starts_with("{")) {
    try {
      return report_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw invalid_input(path.string() + ": " + e.what());
    }
  }
  return report_from_csv(text);
}

// --- Study specifications ---------------------------------------------------------

// Line and column of a byte offset, for diagnostics.
inline std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_input(origin + ": " + locate(text, e.byte > 0 ? e.byte - 1 : 0) + ": malformed JSON (" + e.what() + ")");
  }
}

inline NullModel null_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  std::vector<double> params =
      j.contains("params") ? j.at("params").get<std::vector<double>>() : default_null_params(family);
  return make_null_model(family, std::move(params), j.value("estimate", false));
}

inline StatConfig stat_config_from_json(const json& j, const StatConfig& fallback) {
  StatConfig cfg = fallback;
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("nbins")) cfg.nbins = j.at("nbins").get<std::size_t>();
  if (j.contains("smooth_max_order")) cfg.smooth_max_order = j.at("smooth_max_order").get<int>();
  return cfg;
}

struct PowerStudySpec {
  PowerOptions options;
  std::vector<PowerCase> cases;
};

// {"seed", "B", "reps", "alphas", "methods", "nbins",
//  "cases": [{"name", "null": {"family", "params", "estimate"},
//             "alternative": {"family", "params", "vary", "grid"},
//             "n", "lambda", "binned": {"bins", "range", "bin_null_rows"}, "methods", "nbins"}]}
inline PowerStudySpec parse_power_spec(const std::string& text, const std::string& origin = "spec") {
  const json j = parse_json_text(text, origin);
  PowerStudySpec spec;
  try {
    spec.options.seed = j.value("seed", std::uint64_t{0});
    spec.options.B_null = j.value("B", kDefaultReplicates);
    spec.options.reps = j.value("reps", std::size_t{1000});
    spec.options.alphas = j.value("alphas", std::vector<double>{0.05});
    spec.options.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    throw invalid_input(origin + ": " + e.what());
  }
  const StatConfig base = stat_config_from_json(j, StatConfig{});
  if (!j.contains("cases") || !j.at("cases").is_array() || j.at("cases").empty())
    throw invalid_input(origin + ": 'cases' must be a nonempty array");
  std::size_t index = 0;
  for (const auto& c : j.at("cases")) {
    const std::string where = origin + ": case " + std::to_string(index++);
    try {
      const auto& alt = c.at("alternative");
      SweepSpec sweep{alt.at("family").get<std::string>(), alt.at("params").get<std::vector<double>>(),
                      alt.value("vary", std::size_t{0}), alt.at("grid").get<std::vector<double>>()};
      if (sweep.grid.empty()) throw invalid_input("empty parameter grid");
      PowerCase pc{c.value("name", "case" + std::to_string(index - 1)), null_from_json(c.at("null")), sweep,
                   c.value("n", std::size_t{1000}), std::nullopt, std::nullopt, stat_config_from_json(c, base)};
      if (c.contains("lambda") && !c.at("lambda").is_null()) pc.lambda = c.at("lambda").get<double>();
      if (c.contains("binned")) {
        BinnedSpec b;
        b.bins = c.at("binned").value("bins", std::size_t{50});
        b.bin_null_rows = c.at("binned").value("bin_null_rows", false);
        if (c.at("binned").contains("range")) {
          auto r = c.at("binned").at("range").get<std::vector<double>>();
          if (r.size() != 2) throw invalid_input("binned range needs two numbers");
          b.range = std::pair{r[0], r[1]};
        }
        pc.binned = b;
      }
      for (std::size_t g = 0; g < pc.sweep.grid.size(); ++g) (void)pc.sweep.at(g);
      spec.cases.push_back(std::move(pc));
    } catch (const json::exception& e) {
      throw invalid_input(where + ": " + e.what());
    } catch (const Error& e) {
      throw invalid_input(where + ": " + e.what());
    }
  }
  return spec;
}

struct Type1StudySpec {
  Type1Options options;
  std::vector<Type1Cell> cells;
};

// {"seed", "B", "reps", "alphas", "methods", "nbins",
//  "cells": [{"label", "null": {...}, "n"}]}; without "cells" the default grid is used.
inline Type1StudySpec parse_type1_spec(const std::string& text, const std::string& origin = "spec") {
  const json j = parse_json_text(text, origin);
  Type1StudySpec spec;
  try {
    spec.options.seed = j.value("seed", std::uint64_t{0});
    spec.options.B = j.value("B", kDefaultReplicates);
    spec.options.reps = j.value("reps", std::size_t{1000});
    spec.options.alphas = j.value("alphas", std::vector<double>{0.01, 0.05, 0.10});
    spec.options.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    throw invalid_input(origin + ": " + e.what());
  }
  spec.options.config = stat_config_from_json(j, StatConfig{});
  if (!j.contains("cells")) {
    spec.cells = default_type1_cells();
    return spec;
  }
  std::size_t index = 0;
  for (const auto& c : j.at("cells")) {
    const std::string where = origin + ": cell " + std::to_string(index++);
    try {
      NullModel m = null_from_json(c.at("null"));
      std::string label = c.value("label", std::string(m.family()));
      spec.cells.push_back({label, m, c.at("n").get<std::size_t>()});
    } catch (const json::exception& e) {
      throw invalid_input(where + ": " + e.what());
    } catch (const Error& e) {
      throw invalid_input(where + ": " + e.what());
    }
  }
  if (spec.cells.empty()) throw invalid_input(origin + ": 'cells' is empty");
  return spec;
}

// --- Study outputs ----------------------------------------------------------------

inline std::string alpha_label(double a) { return "alpha_" + format_double(a); }

inline std::string type1_to_csv(const std::vector<Type1Row>& rows, const std::vector<double>& alphas) {
  std::string out = "distribution,parameters,n";
  for (double a : alphas) out += "," + alpha_label(a);
  out += "\n";
  for (const auto& r : rows) {
    out += r.label + "," + (r.estimated ? "Estimated" : "Fixed") + "," + std::to_string(r.n);
    for (double v : r.rejection) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

// One row per case x method x grid point x alpha.
inline std::string power_to_csv(const std::vector<PowerResult>& results) {
  std::string out = "case,method,grid_value,alpha,power\n";
  for (const auto& res : results)
    for (std::size_t a = 0; a < res.alphas.size(); ++a)
      for (std::size_t g = 0; g < res.grid.size(); ++g)
        for (std::size_t m = 0; m < res.methods.size(); ++m)
          out += res.name + "," + res.methods[m] + "," + format_double(res.grid[g]) + "," +
                 format_double(res.alphas[a]) + "," + format_double(res.power[a][g][m]) + "\n";
  return out;
}

// Reassembles power results from power_to_csv output.
inline std::vector<PowerResult> power_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (trim(line) != "case,method,grid_value,alpha,power") throw invalid_input("power csv: bad header");
  std::vector<PowerResult> results;
  auto index_of = [](std::vector<double>& v, double x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.push_back(x);
    return v.size() - 1;
  };
  struct Cell { std::size_t c, m, g, a; double p; };
  std::vector<Cell> cells;
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 5) throw invalid_input("power csv: line " + std::to_string(no) + ": expected 5 fields");
    auto it = std::find_if(results.begin(), results.end(), [&](const PowerResult& r) { return r.name == f[0]; });
    if (it == results.end()) {
      results.push_back(PowerResult{});
      results.back().name = f[0];
      it = results.end() - 1;
    }
    auto& res = *it;
    auto mit = std::find(res.methods.begin(), res.methods.end(), f[1]);
    std::size_t m = static_cast<std::size_t>(mit - res.methods.begin());
    if (mit == res.methods.end()) res.methods.push_back(f[1]);
    auto gv = parse_double(f[2]), av = parse_double(f[3]), pv = parse_double(f[4]);
    if (!gv || !av || !pv) throw invalid_input("power csv: line " + std::to_string(no) + ": bad number");
    cells.push_back({static_cast<std::size_t>(it - results.begin()), m, index_of(res.grid, *gv),
                     index_of(res.alphas, *av), *pv});
  }
  for (auto& res : results)
    res.power.assign(res.alphas.size(),
                     std::vector<std::vector<double>>(res.grid.size(), std::vector<double>(res.methods.size(), 0.0)));
  for (const auto& c : cells) results[c.c].power[c.a][c.g][c.m] = c.p;
  return results;
}

inline std::string summary_to_csv(const StudySummary& s) {
  std::size_t ranks = 0;
  for (const auto& [m, counts] : s.rank_counts) ranks = std::max(ranks, counts.size());
  std::string out = "method,mean_power,mean_rank_best_is_1,mean_rank_worst_is_1";
  for (std::size_t r = 1; r <= ranks; ++r) out += ",times_rank_" + std::to_string(r);
  out += "\n";
  for (const auto& m : s.methods) {
    out += m + "," + format_double(s.mean_power.at(m)) + "," + format_double(s.mean_rank.at(m)) + "," +
           format_double(s.mean_rank_reversed.at(m));
    const auto& counts = s.rank_counts.at(m);
    for (std::size_t r = 0; r < ranks; ++r) out += "," + std::to_string(r < counts.size() ? counts[r] : 0);
    out += "\n";
  }
  return out;
}

inline std::string gaps_to_csv(const StudySummary& s) {
  std::string out = "case,grid_value,method,power,gap_to_best\n";
  for (const auto& g : s.gaps) {
    if (!g.grid_index) {
      out += g.name + ",,,,\n";  // no grid point reached 90% power
      continue;
    }
    for (const auto& [m, p] : g.power)
      out += g.name + "," + format_double(g.grid_value) + "," + m + "," + format_double(p) + "," +
             format_double(g.best - p) + "\n";
  }
  return out;
}

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) rows.push_back(split(line, ','));
  return rows;
}

// Power curves for one case; RC drawn as a connected line, others as dots.
inline std::string power_svg(const PowerResult& res, std::size_t alpha_index = 0) {
  const double W = 640, H = 420, left = 60, right = 150, top = 30, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  double gmin = *std::min_element(res.grid.begin(), res.grid.end());
  double gmax = *std::max_element(res.grid.begin(), res.grid.end());
  if (gmax == gmin) {
    gmin -= 0.5;
    gmax += 0.5;
  }
  auto sx = [&](double g) { return left + (g - gmin) / (gmax - gmin) * pw; };
  auto sy = [&](double p) { return top + (1.0 - p) * ph; };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                  "#8c6d31", "#843c39", "#7b4173", "#3182bd"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<text x=\"" << left << "\" y=\"18\" font-size=\"14\">" << res.name << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double p = t / 4.0;
    o << "<text x=\"" << left - 8 << "\" y=\"" << sy(p) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
      << format_double(p) << "</text>\n";
  }
  o << "<text x=\"" << left << "\" y=\"" << H - 15 << "\" font-size=\"11\">" << format_double(gmin) << "</text>\n";
  o << "<text x=\"" << left + pw << "\" y=\"" << H - 15 << "\" font-size=\"11\" text-anchor=\"end\">"
    << format_double(gmax) << "</text>\n";
  for (std::size_t m = 0; m < res.methods.size(); ++m) {
    const char* color = m == 0 ? "black" : palette[(m - 1) % 16];
    if (m == 0) {
      o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
      for (std::size_t g = 0; g < res.grid.size(); ++g)
        o << sx(res.grid[g]) << "," << sy(res.power[alpha_index][g][m]) << " ";
      o << "\"/>\n";
    }
    for (std::size_t g = 0; g < res.grid.size(); ++g)
      o << "<circle cx=\"" << sx(res.grid[g]) << "\" cy=\"" << sy(res.power[alpha_index][g][m]) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
    o << "<text x=\"" << W - right + 10 << "\" y=\"" << top + 14 * (m + 1) << "\" font-size=\"11\" fill=\"" << color
      << "\">" << res.methods[m] << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline std::string demo_minima_csv(const AnovaDemoResult& d) {
  std::string out = "rep,raw_min_p,adjusted\n";
  for (std::size_t i = 0; i < d.raw_minima.size(); ++i)
    out += std::to_string(i) + "," + format_double(d.raw_minima[i]) + "," + format_double(d.adjusted[i]) + "\n";
  return out;
}

inline std::string demo_curve_csv(const AnovaDemoResult& d) {
  std::string out = "p,ecdf,identity,independent\n";
  for (std::size_t i = 0; i < d.curve.grid().size(); ++i)
    out += format_double(d.curve.grid()[i]) + "," + format_double(d.curve.cdf_values()[i]) + "," +
           format_double(d.identity_overlay[i]) + "," + format_double(d.bonferroni_overlay[i]) + "\n";
  return out;
}

}  // namespace gofsim::io
