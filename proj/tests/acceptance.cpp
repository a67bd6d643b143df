// Acceptance run: one verdict line per criterion, details indented below it.
// Usage: acceptance [path-to-nambu-cli]
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "nambu/report.hpp"
#include "nambu/suites.hpp"
#include "nambu/verify.hpp"

using namespace nambu;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int n, const std::string& title, bool ok, const std::string& detail) {
  std::printf("criterion %d (%s): %s  %s\n", n, title.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void indent(const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) std::printf("    %s\n", line.c_str());
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void suite_criterion(int n, const std::string& title, const SuiteReport& rep, double limit) {
  const bool fast = rep.seconds < limit;
  verdict(n, title, rep.pass() && fast, fmt("%.2fs (limit %.0fs)", rep.seconds, limit));
  indent(rep.summary());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  suite_criterion(1, "operator identity suite", identity_suite(1, 100), 10.0);
  suite_criterion(2, "bracket suite", bracket_suite(1, 20), 30.0);
  suite_criterion(3, "quantization invariants", quantization_suite(1, {4, 8, 16, 32}, {2, 3, 4, 5, 6, 7, 8, 9, 10}),
                  300.0);

  // Rate reproduction over the whole catalog with the default sweeps. Dense
  // 2-torus, dense 4-torus and tensor runs are timed separately.
  RunConfig t2_cfg, t4_cfg, tensor_cfg;
  for (const auto& t : theorem_catalog())
    (t.structured ? tensor_cfg : t.default_geometry == "t2" ? t2_cfg : t4_cfg).theorems.push_back(t.id);
  std::vector<ResidualSeries> all;
  double secs[3] = {};
  int i = 0;
  for (const RunConfig* c : {&t2_cfg, &t4_cfg, &tensor_cfg}) {
    const VerifyOutcome o = run_verify(*c, plan_verify(*c));
    secs[i++] = o.seconds;
    all.insert(all.end(), o.series.begin(), o.series.end());
  }
  const bool fast = secs[1] < 900.0 && secs[2] < 1800.0;

  for (RateClass rate : {RateClass::inv_k, RateClass::inv_k2}) {
    std::vector<ResidualSeries> picked;
    for (const auto& s : all)
      if (theorem_info(s.theorem_id).rate == rate) picked.push_back(s);
    int ok = 0;
    for (const auto& s : picked) ok += s.pass;
    const bool inv_k = rate == RateClass::inv_k;
    verdict(inv_k ? 4 : 5, inv_k ? "O(1/k) rates" : "O(1/k^2) rates", ok == static_cast<int>(picked.size()) && fast,
            fmt("%.0f/%.0f series with slope <= %.1f and R2 >= 0.9", ok, static_cast<double>(picked.size()),
                slope_threshold(rate)) +
                fmt("; t2 %.1fs, dense t4 %.1fs (limit 900s), tensor %.1fs (limit 1800s)", secs[0], secs[1], secs[2]));
    indent(summary_table(picked));
  }

  // Structured norms against dense materialization at k <= 3.
  {
    const auto c0 = Clock::now();
    const auto geom = TorusGeometry::t4();
    double worst = 0.0;
    int count = 0;
    std::string detail;
    for (const auto& t : theorem_catalog()) {
      if (!t.structured) continue;
      for (std::uint64_t seed : {1, 2, 3}) {
        const auto tup = seeded_tuple(seed, t.arity, 4);
        for (int k : {2, 3}) {
          EvalOptions lanczos, dense_opts;
          dense_opts.dense_tensor = true;
          if (t.uses_ik) lanczos.ik_sign = dense_opts.ik_sign = detect_ik_sign(t.id, tup.symbols, geom, 0, 2);
          const double a = evaluate_theorem(t.id, tup.symbols, geom, 0, k, lanczos).residual;
          const double b = evaluate_theorem(t.id, tup.symbols, geom, 0, k, dense_opts).residual;
          const double err = std::abs(a - b) / std::max(1.0, b);
          worst = std::max(worst, err);
          ++count;
          if (err > 1e-8) detail += t.id + fmt(" seed %.0f k %.0f: %.3e vs %.3e\n", double(seed), k, a, b);
        }
      }
    }
    const double secs = since(c0);
    verdict(6, "structured vs dense", worst <= 1e-8 && secs < 120.0,
            fmt("%.0f comparisons, worst relative gap %.2e (tol 1e-8), %.1fs (limit 120s)", count, worst, secs));
    indent(detail);
  }

  // Determinism: library reruns, worker counts, and the CLI with cold and warm basis caches.
  {
    RunConfig c;
    c.theorems = {"bt_commutator", "volform_n2", "directsum", "tensor_comm"};
    const auto plan = plan_verify(c);
    const std::string first = residual_csv(run_verify(c, plan).series);
    c.workers = 2;
    const std::string second = residual_csv(run_verify(c, plan).series);
    bool same = first == second;
    std::string detail = same ? "library reruns identical" : "library reruns differ";

    if (!cli.empty()) {
      namespace fs = std::filesystem;
      const fs::path root = fs::temp_directory_path() / "nambu_acceptance_det";
      fs::remove_all(root);
      fs::create_directories(root / "cache");
      const std::string args = " verify --theorem bt_product,hyp_fourfn,tensor_product --seeds 4,5 >/dev/null 2>&1";
      const std::string env = "NAMBU_CACHE_DIR=" + (root / "cache").string() + " ";
      const int rc1 = std::system((env + cli + args + " --out " + (root / "a").string()).c_str());
      const int rc2 = std::system((env + cli + args + " --out " + (root / "b").string() + " --workers 2").c_str());
      const std::string a = read_file((root / "a" / "residuals.csv").string());
      const std::string b = read_file((root / "b" / "residuals.csv").string());
      const bool cli_same = !a.empty() && a == b;
      // exit 1 only means a threshold failed; 2 and 3 mean the run itself broke
      auto ran = [](int rc) { return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) <= 1; };
      same = same && cli_same && ran(rc1) && ran(rc2);
      detail += cli_same ? "; CLI cold/warm cache runs byte-identical" : "; CLI runs differ or failed";
      fs::remove_all(root);
    } else {
      detail += "; CLI path not given, CLI runs skipped";
    }
    verdict(7, "determinism", same, detail);
  }

  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
