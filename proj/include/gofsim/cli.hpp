#pragma once

// Command-line front end: test, type1, power and demo subcommands.

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gofsim/adjust.hpp"
#include "gofsim/error.hpp"
#include "gofsim/io.hpp"
#include "gofsim/model.hpp"
#include "gofsim/statistics.hpp"
#include "gofsim/studies.hpp"

namespace gofsim::cli {

inline constexpr int kExitOk = 0;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out;
};

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << s << "\n";
  return s;
}

inline std::filesystem::path sibling(const std::filesystem::path& main, const std::string& suffix,
                                     const std::string& ext) {
  auto stem = main.stem().string();
  return main.parent_path() / (stem + suffix + ext);
}

inline std::string print_report(const TestReport& r) {
  std::ostringstream o;
  o << "RC " << io::format_double(r.rc) << "\n";
  for (const auto& [m, p] : r.pvalues) o << method_name(m) << " " << io::format_double(p) << "\n";
  return o.str();
}

// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Simultaneous goodness-of-fit testing with a simulation-adjusted minimum p-value"};
  app.require_subcommand(1);

  CommonFlags common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { common.seed = v; }, "master random seed");
    sub->add_option("--threads", common.threads, "worker threads (0 = all cores)");
  };

  // test
  auto* test = app.add_subcommand("test", "test a data set against a null distribution");
  std::string data_path, family = "normal", params_text, methods_text, format = "json";
  bool estimate = false, fresh_batch = false, bin_null = false;
  std::size_t B = kDefaultReplicates, nbins = kDefaultBinCount;
  std::optional<double> lambda;
  test->add_option("data,--data", data_path, "data file: one value per line, or an edges,counts histogram")->required();
  test->add_option("--null", family, "null family: normal, uniform, exponential, truncexp, beta, gamma, erlang");
  test->add_option("--params", params_text, "comma-separated null parameters");
  test->add_flag("--estimate", estimate, "re-estimate the parameters from the data");
  test->add_option("--methods", methods_text, "comma-separated methods (default: KS,AD,CdM,W,ZA,ZK,ZC)");
  test->add_option("--B", B, "null simulation size");
  test->add_option("--lambda", lambda, "sample size is Poisson(lambda)");
  test->add_option("--nbins", nbins, "bins for EqualSize/EqualProb");
  test->add_flag("--fresh-minp-batch", fresh_batch, "simulate a second batch for the min-p distribution");
  test->add_flag("--bin-null-rows", bin_null, "histogram data: bin each simulated null sample like the data");
  test->add_option("--out", common.out, "report file");
  test->add_option("--format", format, "report format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_common(test);

  // type1
  auto* type1 = app.add_subcommand("type1", "type I error study");
  std::string spec_path, alpha_text;
  std::optional<std::size_t> reps_override, B_override;
  type1->add_option("--spec", spec_path, "study spec (JSON); default: the built-in 21-cell grid");
  type1->add_option("--B", B_override, "null simulation size per test");
  type1->add_option("--reps", reps_override, "replications per cell");
  type1->add_option("--alpha", alpha_text, "comma-separated nominal levels");
  type1->add_option("--methods", methods_text, "comma-separated methods");
  type1->add_option("--out", common.out, "CSV output path")->required();
  add_common(type1);

  // power
  auto* power = app.add_subcommand("power", "power study over alternative sweeps");
  bool svg = false;
  power->add_option("--spec", spec_path, "study spec (JSON)")->required();
  power->add_option("--B", B_override, "null simulation size per case");
  power->add_option("--reps", reps_override, "replications per grid point");
  power->add_option("--alpha", alpha_text, "comma-separated nominal levels");
  power->add_option("--out", common.out, "CSV output path; summary, gaps and plots are written alongside")->required();
  power->add_flag("--svg", svg, "write one SVG power plot per case");
  add_common(power);

  // demo
  auto* demo = app.add_subcommand("demo", "p-value adjustment for all pairwise group comparisons");
  std::size_t obs = 100, groups = 5, demo_reps = 1000;
  demo->add_option("--obs", obs, "observations per replication");
  demo->add_option("--groups", groups, "number of groups");
  demo->add_option("--reps", demo_reps, "replications");
  demo->add_option("--out", common.out, "output prefix; writes <out>_minima.csv and <out>_curve.csv")->required();
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : static_cast<int>(ErrorKind::InvalidInput);
  }

  try {
    if (test->parsed()) {
      const auto params = params_text.empty() ? default_null_params(family) : io::parse_double_list(params_text);
      const NullModel model = make_null_model(family, params, estimate);
      StatConfig cfg;
      if (!methods_text.empty()) cfg.methods = io::parse_method_list(methods_text);
      cfg.nbins = nbins;
      RunOptions opt;
      opt.B = B;
      opt.lambda = lambda;
      opt.threads = common.threads;
      opt.fresh_minp_batch = fresh_batch;
      opt.bin_null_rows = bin_null;
      opt.seed = resolve_seed(common.seed, err);
      const Sample sample = io::read_data_file(data_path);
      const TestReport report = run_test(sample, model, cfg, opt);
      out << print_report(report);
      if (!report.dropped.empty()) {
        err << "not applicable, skipped:";
        for (MethodId m : report.dropped) err << " " << method_name(m);
        err << "\n";
      }
      if (!common.out.empty())
        io::write_text(common.out, format == "csv" ? io::report_to_csv(report) : io::report_to_json(report).dump(2) + "\n");
      return kExitOk;
    }

    if (type1->parsed()) {
      io::Type1StudySpec spec;
      if (spec_path.empty()) {
        spec.cells = default_type1_cells();
      } else {
        spec = io::parse_type1_spec(io::read_text(spec_path), spec_path);
      }
      if (B_override) spec.options.B = *B_override;
      if (reps_override) spec.options.reps = *reps_override;
      if (!alpha_text.empty()) spec.options.alphas = io::parse_double_list(alpha_text);
      if (!methods_text.empty()) spec.options.config.methods = io::parse_method_list(methods_text);
      if (common.seed || spec_path.empty()) spec.options.seed = resolve_seed(common.seed, err);
      if (common.threads) spec.options.threads = common.threads;
      const auto rows = type1_study(spec.cells, spec.options);
      const std::string csv = io::type1_to_csv(rows, spec.options.alphas);
      io::write_text(common.out, csv);
      out << csv;
      return kExitOk;
    }

    if (power->parsed()) {
      auto spec = io::parse_power_spec(io::read_text(spec_path), spec_path);
      if (B_override) spec.options.B_null = *B_override;
      if (reps_override) spec.options.reps = *reps_override;
      if (!alpha_text.empty()) spec.options.alphas = io::parse_double_list(alpha_text);
      if (common.seed) spec.options.seed = *common.seed;
      if (common.threads) spec.options.threads = common.threads;
      std::vector<PowerResult> results;
      for (std::size_t c = 0; c < spec.cases.size(); ++c) {
        err << "case " << spec.cases[c].name << "\n";
        results.push_back(with_stage(spec.cases[c].name, [&] { return power_study(spec.cases[c], spec.options, c); }));
      }
      const std::filesystem::path main = common.out;
      io::write_text(main, io::power_to_csv(results));
      const auto summary = summarize(results);
      io::write_text(sibling(main, "_summary", ".csv"), io::summary_to_csv(summary));
      io::write_text(sibling(main, "_gaps", ".csv"), io::gaps_to_csv(summary));
      if (svg)
        for (const auto& r : results) io::write_text(sibling(main, "_" + r.name, ".svg"), io::power_svg(r));
      out << io::summary_to_csv(summary);
      return kExitOk;
    }

    if (demo->parsed()) {
      const auto result = anova_demo(obs, groups, demo_reps, resolve_seed(common.seed, err), common.threads);
      const std::filesystem::path prefix = common.out;
      io::write_text(prefix.string() + "_minima.csv", io::demo_minima_csv(result));
      io::write_text(prefix.string() + "_curve.csv", io::demo_curve_csv(result));
      double mean = 0.0;
      for (double m : result.raw_minima) mean += m;
      mean /= static_cast<double>(result.raw_minima.size());
      out << "pairs " << result.pairs << "\n";
      out << "mean_raw_min_p " << io::format_double(mean) << "\n";
      out << "ks_distance_adjusted " << io::format_double(uniformity_distance(result.adjusted)) << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::InvalidInput);
  }
  return kExitOk;
}

}  // namespace gofsim::cli
