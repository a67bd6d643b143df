#pragma once

#include <string>
#include <vector>

#include "nambu/experiments.hpp"

namespace nambu {

/// theorem_id,geometry,r,seed,k,residual,scaled_residual,slope,r2,converged
/// with fixed formatting, one row per (series, k), in series order.
std::string residual_csv(const std::vector<ResidualSeries>& series);

/// Inverse of residual_csv: rebuilds series (residuals, convergence) and
/// refits them. Throws Error on malformed input.
std::vector<ResidualSeries> read_residual_csv(const std::string& text);

/// Log-log plot of every series of one theorem with its fitted line and a
/// dashed threshold-slope reference.
std::string rate_svg(const std::string& theorem_id, const std::vector<ResidualSeries>& series);

/// One line per series: slope, R^2, threshold, verdict, notes.
std::string summary_table(const std::vector<ResidualSeries>& series);

/// Writes residuals.csv, summary.txt and <theorem>.svg into dir (created if
/// missing). Returns the written paths.
std::vector<std::string> write_reports(const std::string& dir, const std::vector<ResidualSeries>& series);

}  // namespace nambu
