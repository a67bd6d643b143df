#include "nambu/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <thread>

namespace nambu {

namespace {

std::vector<int> structures_for(const TheoremInfo& info, const std::string& geometry) {
  const bool t2 = geometry == "t2", all = geometry == "t4";
  const int single = geometry.size() == 5 && geometry.rfind("t4-r", 0) == 0 ? geometry[4] - '0' : 0;
  switch (info.domain) {
    case Domain::t2:
      if (t2) return {1};
      break;
    case Domain::surface:
      if (t2) return {1};
      [[fallthrough]];
    case Domain::t4_single:
      if (single) return {single};
      if (all) return {1, 2, 3};
      break;
    case Domain::t4_all:
      if (all) return {0};
      break;
  }
  return {};
}

/// Runs fn(i) for i in [0, n) on `workers` threads; the first exception wins.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int t = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int j = 1; j < t; ++j) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<PlannedSeries> plan_verify(const RunConfig& c) {
  validate(c);
  std::vector<const TheoremInfo*> infos;
  if (c.theorems.empty())
    for (const auto& t : theorem_catalog()) infos.push_back(&t);
  else
    for (const auto& id : c.theorems) infos.push_back(&theorem_info(id));

  std::vector<PlannedSeries> plan;
  for (const TheoremInfo* info : infos) {
    const std::string geometry = c.geometry.empty() ? info->default_geometry : c.geometry;
    const auto rs = structures_for(*info, geometry);
    if (rs.empty()) {
      if (c.theorems.empty()) continue;  // whole catalog: skip what the geometry cannot host
      throw UsageError(info->id + " does not run on geometry '" + geometry + "'");
    }
    const int dim = geometry == "t2" ? 2 : 4;

    std::vector<SymbolTuple> tuples;
    if (!c.symbols.empty()) {
      if (static_cast<int>(c.symbols.size()) != info->arity)
        throw UsageError(info->id + " takes " + std::to_string(info->arity) + " symbols, got " +
                         std::to_string(c.symbols.size()));
      SymbolTuple t;
      for (const auto& s : c.symbols) {
        t.symbols.push_back(parse_symbol_spec(s, dim));
        t.descriptor += (t.descriptor.empty() ? "" : ";") + s;
      }
      tuples.push_back(std::move(t));
    } else {
      for (auto seed : c.seeds) tuples.push_back(seeded_tuple(seed, info->arity, dim, c.max_freq));
    }

    for (int r : rs)
      for (const auto& t : tuples) plan.push_back({info, geometry, r, t, c.ks.empty() ? info->default_ks : c.ks});
  }
  if (plan.empty()) throw UsageError("nothing to run for geometry '" + c.geometry + "'");
  return plan;
}

std::string describe_plan(const std::vector<PlannedSeries>& plan) {
  std::string out;
  std::size_t evals = 0;
  for (const auto& p : plan) {
    std::string ks;
    for (int k : p.ks) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    char line[512];
    std::snprintf(line, sizeof line, "%-20s %-6s r=%d  tuple %-22s k={%s}\n", p.info->id.c_str(), p.geometry.c_str(),
                  p.r, p.tuple.descriptor.c_str(), ks.c_str());
    out += line;
    evals += p.ks.size();
  }
  return out + std::to_string(plan.size()) + " series, " + std::to_string(evals) + " evaluations\n";
}

bool VerifyOutcome::all_pass() const {
  return std::all_of(series.begin(), series.end(), [](const ResidualSeries& s) { return s.pass; });
}

bool VerifyOutcome::any_nonconverged() const {
  return std::any_of(series.begin(), series.end(), [](const ResidualSeries& s) { return !s.converged; });
}

int VerifyOutcome::exit_code() const {
  if (any_nonconverged()) return 3;
  return all_pass() ? 0 : 1;
}

VerifyOutcome run_verify(const RunConfig& c, const std::vector<PlannedSeries>& plan, const ProgressFn& progress) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mutex out_mutex;
  auto say = [&](const std::string& msg) {
    if (!progress) return;
    std::lock_guard lock(out_mutex);
    progress(msg);
  };

  VerifyOutcome out;
  out.series.resize(plan.size());
  std::vector<TorusGeometry> geoms;
  std::vector<EvalOptions> opts(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& p = plan[i];
    auto& s = out.series[i];
    s.theorem_id = p.info->id;
    s.geometry = p.geometry;
    s.r = p.r;
    s.seed = p.tuple.seed;
    s.tuple = p.tuple.descriptor;
    s.ks = p.ks;
    s.values.assign(p.ks.size(), Evaluation{});
    geoms.push_back(geometry_preset(p.geometry).geometry);
    opts[i].norm_tol = c.norm_tol;
    opts[i].max_iter = c.max_iter;
    opts[i].grid_nodes = c.grid;
  }

  // Sign of ik, locked per series at the smallest level.
  std::vector<std::size_t> signed_series;
  for (std::size_t i = 0; i < plan.size(); ++i)
    if (plan[i].info->uses_ik) signed_series.push_back(i);
  parallel_for(signed_series.size(), c.workers, [&](std::size_t j) {
    const std::size_t i = signed_series[j];
    const auto& p = plan[i];
    const int kmin = *std::min_element(p.ks.begin(), p.ks.end());
    opts[i].ik_sign = detect_ik_sign(p.info->id, p.tuple.symbols, geoms[i], p.r, kmin, opts[i]);
    out.series[i].ik_sign = opts[i].ik_sign;
  });

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < plan.size(); ++i)
    for (std::size_t j = 0; j < plan[i].ks.size(); ++j) tasks.emplace_back(i, j);
  parallel_for(tasks.size(), c.workers, [&](std::size_t t) {
    const auto [i, j] = tasks[t];
    const auto& p = plan[i];
    const auto e0 = std::chrono::steady_clock::now();
    out.series[i].values[j] = evaluate_theorem(p.info->id, p.tuple.symbols, geoms[i], p.r, p.ks[j], opts[i]);
    char line[256];
    std::snprintf(line, sizeof line, "  %-20s r=%d seed=%llu k=%-3d residual %.4e  (%.2fs)", p.info->id.c_str(), p.r,
                  static_cast<unsigned long long>(p.tuple.seed), p.ks[j], out.series[i].values[j].residual,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - e0).count());
    say(line);
  });

  for (std::size_t i = 0; i < plan.size(); ++i) finalize_series(out.series[i], *plan[i].info);

  // The dimension-4 constant is fixed; report the empirical minimizer next to it.
  std::vector<std::size_t> dim4;
  for (std::size_t i = 0; i < plan.size(); ++i)
    if (plan[i].info->id == "dim4_hyp") dim4.push_back(i);
  parallel_for(dim4.size(), c.workers, [&](std::size_t j) {
    const std::size_t i = dim4[j];
    const auto& f = plan[i].tuple.symbols;
    const int kmax = *std::max_element(plan[i].ks.begin(), plan[i].ks.end());
    char note[96];
    std::snprintf(note, sizeof note, "c=%.2f; best c at k=%d: %.4f", opts[i].dim4_c, kmax,
                  best_dim4_c(f[0], f[1], f[2], f[3], geoms[i], kmax));
    auto& s = out.series[i].note;
    s = s.empty() ? note : s + "; " + note;
  });

  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace nambu
