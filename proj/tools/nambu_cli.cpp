// nambu: batch driver for the quantization experiments.
//
// Exit codes: 0 ok, 1 threshold or identity violated, 2 usage/config error,
// 3 a norm iteration did not converge.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nambu/config.hpp"
#include "nambu/matrix_io.hpp"
#include "nambu/norm.hpp"
#include "nambu/report.hpp"
#include "nambu/suites.hpp"
#include "nambu/toeplitz.hpp"
#include "nambu/verify.hpp"

using namespace nambu;

namespace {

constexpr int kOk = 0, kViolation = 1, kUsage = 2;

int run_suite(const SuiteReport& rep) {
  std::cout << rep.summary();
  return rep.pass() ? kOk : kViolation;
}

struct VerifyFlags {
  std::string config, geometry, ks, seeds, out, save_config;
  std::vector<std::string> theorems, symbols;
  int max_freq = 0, grid = -1, max_iter = 0, workers = 0;
  double tol = 0.0;
  bool dry_run = false;
};

void add_verify_flags(CLI::App* sub, VerifyFlags& f) {
  sub->add_option("--config", f.config, "JSON run config; flags override its fields");
  sub->add_option("--geometry", f.geometry, "t2, t4, t4-r1, t4-r2 or t4-r3 (default: per theorem)");
  sub->add_option("--theorem", f.theorems, "theorem id (repeatable or comma separated; default: all)")->delimiter(',');
  sub->add_option("--k", f.ks, "levels: start:stop[:step] or a comma list (default: per theorem)");
  sub->add_option("--seeds", f.seeds, "comma separated tuple seeds (default 1,2,3)");
  sub->add_option("--symbol", f.symbols, "explicit symbol spec, one per slot (repeatable; replaces seeds)");
  sub->add_option("--max-freq", f.max_freq, "max frequency of seeded symbols (default 2)");
  sub->add_option("--grid", f.grid, "quadrature nodes per axis, used as a floor over the grid rule");
  sub->add_option("--tol", f.tol, "relative tolerance of the structured norm iteration");
  sub->add_option("--max-iter", f.max_iter, "iteration cap of the structured norm");
  sub->add_option("--workers", f.workers, "worker threads for the (theorem, k) queue");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--save-config", f.save_config, "write the effective config as JSON");
  sub->add_flag("--dry-run", f.dry_run, "print the plan and exit");
}

RunConfig effective_config(const VerifyFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.geometry.empty()) c.geometry = f.geometry;
  if (!f.theorems.empty()) c.theorems = f.theorems;
  if (!f.ks.empty()) c.ks = parse_k_range(f.ks);
  if (!f.seeds.empty()) {
    c.seeds.clear();
    std::stringstream ss(f.seeds);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        c.seeds.push_back(std::stoull(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::logic_error&) {
        throw UsageError("bad seed '" + part + "'");
      }
    }
  }
  if (!f.symbols.empty()) c.symbols = f.symbols;
  if (f.max_freq) c.max_freq = f.max_freq;
  if (f.grid >= 0) c.grid = f.grid;
  if (f.tol > 0) c.norm_tol = f.tol;
  if (f.max_iter) c.max_iter = f.max_iter;
  if (f.workers) c.workers = f.workers;
  if (!f.out.empty()) c.output_dir = f.out;
  validate(c);
  return c;
}

int run_verify_cmd(const RunConfig& c, bool dry_run) {
  const auto plan = plan_verify(c);
  if (dry_run) {
    std::cout << describe_plan(plan) << "output: " << c.output_dir << "\n";
    return kOk;
  }
  std::cerr << "verify: " << plan.size() << " series, " << c.workers << " worker(s)\n";
  const auto outcome = run_verify(c, plan, [](const std::string& msg) { std::cerr << msg << "\n"; });
  for (const auto& p : write_reports(c.output_dir, outcome.series)) std::cerr << "wrote " << p << "\n";
  std::cout << summary_table(outcome.series);
  char line[128];
  std::snprintf(line, sizeof line, "verify: %s in %.1fs\n",
                outcome.exit_code() == 0 ? "all thresholds met"
                : outcome.exit_code() == 3 ? "norm iteration did not converge"
                                           : "threshold violated",
                outcome.seconds);
  std::cout << line;
  return outcome.exit_code();
}

int run_report_cmd(const std::string& input, const std::string& out_dir) {
  std::ifstream in(input);
  if (!in) throw UsageError("cannot read '" + input + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::vector<ResidualSeries> series;
  try {
    series = read_residual_csv(ss.str());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> ids;
  for (const auto& s : series)
    if (std::find(ids.begin(), ids.end(), s.theorem_id) == ids.end()) ids.push_back(s.theorem_id);
  for (const auto& id : ids) {
    const auto path = (fs::path(out_dir) / (id + ".svg")).string();
    std::ofstream(path, std::ios::binary) << rate_svg(id, series);
    std::cerr << "wrote " << path << "\n";
  }
  std::cout << summary_table(series);
  VerifyOutcome o;
  o.series = std::move(series);
  return o.exit_code();
}

int run_quantize_cmd(const std::string& spec, const std::string& geometry, int r, int k, const std::string& out,
                     const std::string& format) {
  const GeometryChoice g = [&] {
    try {
      return geometry_preset(geometry);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  if (r == 0) r = g.r == 0 ? 1 : g.r;
  if (r < 1 || r > g.geometry.num_structures()) throw UsageError("structure index out of range");
  if (k < 1) throw UsageError("level must be positive");
  if (format != "bin" && format != "csv") throw UsageError("format must be bin or csv");
  const FourierSymbol f = parse_symbol_spec(spec, g.geometry.dim());
  const DenseOperator t = quantize(f, g.geometry, r, k);
  if (const auto parent = std::filesystem::path(out).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  save_matrix(out, t.matrix, format == "csv");
  const double herm = (t.matrix - t.matrix.adjoint()).cwiseAbs().maxCoeff();
  std::printf("%s r=%d k=%d: %lldx%lld, ||T_f|| = %.10f, |f|_inf >= %.10f, max|T - T*| = %.2e -> %s\n",
              g.geometry.name().c_str(), r, k, static_cast<long long>(t.matrix.rows()),
              static_cast<long long>(t.matrix.cols()), op_norm(t.matrix), sup_norm(f), herm, out.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berezin-Toeplitz quantization on tori: identities, brackets, operators, rate fits"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::uint64_t seed = 1;
  int trials = 0;
  bool fault = false;

  auto* ident = app.add_subcommand("identities", "exact operator identities on random matrix tuples");
  ident->add_option("--seed", seed, "base seed")->capture_default_str();
  ident->add_option("--trials", trials, "number of tuples (default 100)")->check(CLI::PositiveNumber);
  ident->add_flag("--inject-fault", fault, "flip one sign in the 4-bracket expansion (negative control)");

  auto* brk = app.add_subcommand("brackets", "classical bracket identities on seeded symbols");
  brk->add_option("--seed", seed, "base seed")->capture_default_str();
  brk->add_option("--trials", trials, "number of tuples (default 20)")->check(CLI::PositiveNumber);
  brk->add_flag("--inject-fault", fault, "flip one sign in the Leibniz check (negative control)");

  std::string spec, geometry = "t2", out, format = "bin";
  int r = 0, k = 0;
  auto* quant = app.add_subcommand("quantize", "dump one Toeplitz matrix");
  quant->add_option("--symbol", spec, "symbol spec (preset, random:SEED[:MAXF], JSON list, @file)")->required();
  quant->add_option("--geometry", geometry, "t2, t4-r1, t4-r2 or t4-r3")->capture_default_str();
  quant->add_option("--r", r, "complex structure (default from the geometry)");
  quant->add_option("--k", k, "level")->required();
  quant->add_option("--out", out, "output file")->required();
  quant->add_option("--format", format, "bin (uint64 N + complex64 row-major) or csv")->capture_default_str();

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "residual sweeps, rate fits, CSV and SVG reports");
  add_verify_flags(verify, vf);

  std::string input, report_out;
  auto* report = app.add_subcommand("report", "refit a residual CSV and redraw its plots");
  report->add_option("--input", input, "residuals.csv written by verify")->required();
  report->add_option("--out", report_out, "directory for the SVGs (default: next to the input)");

  VerifyFlags af;
  auto* all = app.add_subcommand("all", "identities, brackets and the full verify catalog");
  add_verify_flags(all, af);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*ident) return run_suite(identity_suite(seed, trials ? trials : 100, fault));
    if (*brk) return run_suite(bracket_suite(seed, trials ? trials : 20, fault));
    if (*quant) return run_quantize_cmd(spec, geometry, r, k, out, format);
    if (*verify || *all) {
      const VerifyFlags& f = *verify ? vf : af;
      const RunConfig c = effective_config(f);
      if (!f.save_config.empty()) save_config(f.save_config, c);
      if (*verify) return run_verify_cmd(c, f.dry_run);
      if (f.dry_run) return run_verify_cmd(c, true);
      const int a = run_suite(identity_suite(1, 100));
      const int b = run_suite(bracket_suite(1, 20));
      const int v = run_verify_cmd(c, false);
      return std::max({a, b, v});
    }
    if (*report) {
      const std::string dir =
          report_out.empty() ? std::filesystem::path(input).parent_path().string() : report_out;
      return run_report_cmd(input, dir.empty() ? "." : dir);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
