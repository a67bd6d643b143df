#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nambu/config.hpp"
#include "nambu/experiments.hpp"

namespace nambu {

/// One (theorem, geometry, r, tuple) series to evaluate over ks.
struct PlannedSeries {
  const TheoremInfo* info = nullptr;
  std::string geometry;  // preset name; "t4" for statements over all structures
  int r = 0;             // 0 for statements over all structures
  SymbolTuple tuple;
  std::vector<int> ks;
};

/// Expands a config into series. Throws UsageError for unknown ids,
/// theorem/geometry mismatches and malformed symbol specs.
std::vector<PlannedSeries> plan_verify(const RunConfig& c);

std::string describe_plan(const std::vector<PlannedSeries>& plan);

struct VerifyOutcome {
  std::vector<ResidualSeries> series;  // in plan order
  double seconds = 0.0;

  bool all_pass() const;
  bool any_nonconverged() const;
  /// 0 all thresholds met, 1 a threshold violated, 3 a norm iteration failed.
  int exit_code() const;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Work queue over (series, k) with c.workers threads. The ik sign of each
/// series is locked first at its smallest k; results do not depend on the
/// worker count.
VerifyOutcome run_verify(const RunConfig& c, const std::vector<PlannedSeries>& plan, const ProgressFn& progress = {});

}  // namespace nambu
