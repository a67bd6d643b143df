#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nambu/fit.hpp"
#include "nambu/geometry.hpp"
#include "nambu/kron.hpp"

namespace nambu {

enum class RateClass { inv_k, inv_k2 };

/// Fitted slope must not exceed this: -0.7 for O(1/k), -1.6 for O(1/k^2).
double slope_threshold(RateClass rate);
inline constexpr double kMinR2 = 0.9;

enum class Domain {
  surface,    // 2-torus or one structure of the 4-torus
  t2,         // 2-torus only
  t4_single,  // one structure r of the 4-torus
  t4_all,     // all three structures together
};

struct TheoremInfo {
  std::string id;
  std::string statement;
  int arity = 2;
  Domain domain = Domain::surface;
  RateClass rate = RateClass::inv_k;
  bool structured = false;  // tensor-product operators
  bool uses_ik = false;     // odd power of ik, sign is auto-detected
  std::string default_geometry;
  std::vector<int> default_ks;
};

const std::vector<TheoremInfo>& theorem_catalog();
/// Throws Error for an unknown id.
const TheoremInfo& theorem_info(const std::string& id);

struct EvalOptions {
  double ik_sign = 1.0;
  double norm_tol = 1e-10;
  int max_iter = 500;
  /// Minimum quadrature nodes per axis; the grid rule still applies.
  int grid_nodes = 0;
  /// Constant in -c k^2 [T_f, T_g, T_h, T_t] ~ T_{hyp bracket}.
  double dim4_c = 1.5;
  /// Tensor residuals by dense materialization instead of Lanczos.
  bool dense_tensor = false;
};

struct Evaluation {
  double residual = 0.0;
  double hs = 0.0;   // Hilbert-Schmidt norm of the same residual operator
  double aux = 0.0;  // norm bound: upper gap ||T_f|| - |f|_inf
  bool converged = true;
  int iterations = 0;
};

/// Residual of one theorem at one level. r is ignored for Domain::t4_all.
Evaluation evaluate_theorem(const std::string& id, std::span<const FourierSymbol> symbols, const TorusGeometry& geom,
                            int r, int k, const EvalOptions& opts = {});

// Named residuals.
double resid_bt_commutator(const FourierSymbol& f, const FourierSymbol& g, const TorusGeometry& geom, int r, int k,
                           double ik_sign = 1.0);
double resid_bt_product(const FourierSymbol& f, const FourierSymbol& g, const TorusGeometry& geom, int r, int k);
/// (upper_gap, lower_gap).
std::pair<double, double> resid_norm_bound(const FourierSymbol& f, const TorusGeometry& geom, int r, int k);
double resid_volform(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r, int k,
                     double ik_sign = 1.0);
double resid_nambu_commute(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r, int k);
double resid_hyp_fourfn(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                        const TorusGeometry& geom, int r, int k);
double resid_directsum(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                       const TorusGeometry& geom, int k);
double resid_directsum_commute(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                               const FourierSymbol& t, const TorusGeometry& geom, int k);
double resid_dim4(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                  const TorusGeometry& geom, int k);
double resid_dim4_hyp(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                      const TorusGeometry& geom, int k, double c);
/// Minimizer over c of resid_dim4_hyp (golden section on [0.1, 10]).
double best_dim4_c(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                   const TorusGeometry& geom, int k);

enum class TensorWhich { triple_comm, comm, comm_norm, gencomm_norm, prop4, W, product };

/// Residual operator of a tensor-product statement (2 or 4 symbols).
KronSum tensor_residual_operator(TensorWhich which, std::span<const FourierSymbol> fs, const TorusGeometry& geom,
                                 int k, const EvalOptions& opts = {});
/// The W operator of the tensor four-bracket theorem (21 Kronecker terms).
KronSum tensor_w_operator(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int k,
                          const EvalOptions& opts = {});
Evaluation resid_tensor(TensorWhich which, std::span<const FourierSymbol> fs, const TorusGeometry& geom, int k,
                        const EvalOptions& opts = {});

/// Toeplitz matrix with the shared basis cache and an optional grid floor.
Matrix toeplitz_of(const FourierSymbol& f, const TorusGeometry& geom, int r, int k, int grid_nodes = 0);

struct SymbolTuple {
  std::uint64_t seed = 0;
  std::string descriptor;
  std::vector<FourierSymbol> symbols;
};

/// arity real random symbols of max frequency max_freq derived from one seed.
SymbolTuple seeded_tuple(std::uint64_t seed, int arity, int dim, int max_freq = 2);

struct ResidualSeries {
  std::string theorem_id;
  std::string geometry;
  int r = 0;
  std::uint64_t seed = 0;
  std::string tuple;
  std::vector<int> ks;
  std::vector<Evaluation> values;
  double ik_sign = 1.0;
  FitResult fit;
  bool fitted = false;
  bool all_zero = false;
  bool converged = true;
  bool pass = false;
  double max_scaled = 0.0;  // max over k of k^p r(k)
  std::string note;
};

/// Fits the series and decides pass/fail against the theorem's rate class.
void finalize_series(ResidualSeries& s, const TheoremInfo& info);

/// Locks the sign of ik by evaluating both conventions at level k.
double detect_ik_sign(const std::string& id, std::span<const FourierSymbol> symbols, const TorusGeometry& geom, int r,
                      int k, const EvalOptions& opts = {});

}  // namespace nambu
