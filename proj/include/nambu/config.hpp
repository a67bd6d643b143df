#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nambu/symbol.hpp"

namespace nambu {

/// Bad flags, bad config files, unknown ids: exit code 2 territory.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string geometry;               // empty: each theorem's default preset
  std::vector<std::string> theorems;  // empty: the whole catalog
  std::vector<int> ks;                // empty: each theorem's default sweep
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int max_freq = 2;
  std::vector<std::string> symbols;  // one explicit tuple; replaces the seeds
  int grid = 0;                      // quadrature floor, 0 = grid rule only
  double norm_tol = 1e-10;
  int max_iter = 500;
  std::string output_dir = "nambu_out";
  int workers = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);
void save_config(const std::string& path, const RunConfig& c);

/// Checks ids, ranges and symbol specs; throws UsageError.
void validate(const RunConfig& c);

/// "8:32:4" (inclusive), "8,12,16" or a single level.
std::vector<int> parse_k_range(const std::string& text);

/// Symbol specs:
///   cos1, sin2, exp3, cos1cos2, ...     named preset
///   random:SEED[:MAXF]                  seeded random real symbol
///   [{"m":[1,0],"re":0.5,"im":0}, ...]  explicit coefficients
///   @path                               file holding one of the above
FourierSymbol parse_symbol_spec(const std::string& spec, int dim);

}  // namespace nambu
