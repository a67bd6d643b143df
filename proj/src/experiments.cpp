#include "nambu/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nambu/norm.hpp"
#include "nambu/toeplitz.hpp"

namespace nambu {

double slope_threshold(RateClass rate) { return rate == RateClass::inv_k ? -0.7 : -1.6; }

const std::vector<TheoremInfo>& theorem_catalog() {
  static const std::vector<TheoremInfo> catalog = [] {
    const std::vector<int> t2k{8, 12, 16, 24, 32};
    const std::vector<int> t4k{4, 6, 8, 10, 12};
    const std::vector<int> tk{2, 3, 4, 5, 6};
    const auto k1 = RateClass::inv_k, k2 = RateClass::inv_k2;
    return std::vector<TheoremInfo>{
        {"bt_commutator", "||ik[T_f,T_g] - T_{f,g}|| = O(1/k)", 2, Domain::surface, k1, false, true, "t2", t2k},
        {"bt_product", "||T_f T_g - T_fg|| = O(1/k)", 2, Domain::surface, k1, false, false, "t2", t2k},
        {"bt_norm_bound", "|f|_inf - ||T_f|| = O(1/k), ||T_f|| <= |f|_inf", 1, Domain::surface, k1, false, false,
         "t2", t2k},
        {"volform_n1", "||ik [T_f1,T_f2] - T_{f1,f2}|| = O(1/k), Omega = omega", 2, Domain::t2, k1, false, true, "t2",
         t2k},
        {"volform_n2", "||(ik)^2/2 [T_f1..T_f4] - T_{f1..f4}|| = O(1/k), Omega = omega_r^2/2", 4, Domain::t4_single,
         k1, false, false, "t4-r1", t4k},
        {"nambu_commute_n1", "||[T_f1,T_f2]|| = O(1/k)", 2, Domain::t2, k1, false, false, "t2", t2k},
        {"nambu_commute_n2", "||[T_f1,T_f2,T_f3,T_f4]|| = O(1/k^2)", 4, Domain::t4_single, k2, false, false, "t4-r1",
         t4k},
        {"hyp_fourfn", "||-(k^2/2)[T_f;r..T_t;r] - T_{f,g,h,t}_r;r|| = O(1/k)", 4, Domain::t4_single, k1, false,
         false, "t4", t4k},
        {"directsum", "||-(k^2/2)[TT_f..TT_t] - (+)_r T_{f,g,h,t}_r;r|| = O(1/k)", 4, Domain::t4_all, k1, false,
         false, "t4", t4k},
        {"directsum_commute", "||[TT_f,TT_g,TT_h,TT_t]|| = O(1/k^2)", 4, Domain::t4_all, k2, false, false, "t4", t4k},
        {"dim4", "||-(k^2/2)[TT_f..TT_t] - TT_{f,g,h,t} TT_mu|| = O(1/k)", 4, Domain::t4_all, k1, false, false, "t4",
         t4k},
        {"dim4_hyp", "||-c k^2 [TT_f..TT_t] - TT_{f,g,h,t}_hyp|| = O(1/k)", 4, Domain::t4_all, k1, false, false, "t4",
         t4k},
        {"tensor_product", "||X_f X_g - X_fg|| = O(1/k)", 2, Domain::t4_all, k1, true, false, "t4", tk},
        {"tensor_triple_comm", "||(ik)^3 (x)_r [T_f;r,T_g;r] - (x)_r T_{f,g}_r;r|| = O(1/k)", 2, Domain::t4_all, k1,
         true, true, "t4", tk},
        {"tensor_comm", "||ik[X_f,X_g] - (three-term target)|| = O(1/k)", 2, Domain::t4_all, k1, true, true, "t4", tk},
        {"tensor_comm_norm", "||[X_f,X_g]|| = O(1/k)", 2, Domain::t4_all, k1, true, false, "t4", tk},
        {"tensor_gencomm_norm", "||[X_f,X_g,X_h,X_t]|| = O(1/k^2)", 4, Domain::t4_all, k2, true, false, "t4", tk},
        {"tensor_prop4", "||-(k^6/8)(x)_r [T_f;r..T_t;r] - (x)_r T_{f,g,h,t}_r;r|| = O(1/k^2)", 4, Domain::t4_all, k2,
         true, false, "t4", tk},
        {"tensor_W", "||-(k^2/2)[X_f1..X_f4] - W|| = O(1/k)", 4, Domain::t4_all, k1, true, false, "t4", tk},
    };
  }();
  return catalog;
}

const TheoremInfo& theorem_info(const std::string& id) {
  for (const auto& t : theorem_catalog())
    if (t.id == id) return t;
  throw Error("unknown theorem id '" + id + "'");
}

Matrix toeplitz_of(const FourierSymbol& f, const TorusGeometry& geom, int r, int k, int grid_nodes) {
  const auto basis = cached_basis(geom, r, k);
  const QuadratureGrid grid{std::max(grid_rule(k, f.max_freq()), grid_nodes)};
  return toeplitz_matrix(f, *basis, grid).matrix;
}

namespace {

void need_arity(std::span<const FourierSymbol> fs, std::size_t n) {
  if (fs.size() != n) throw Error("theorem expects " + std::to_string(n) + " symbols");
}

void need_t4(const TorusGeometry& geom) {
  if (geom.dim() != 4 || geom.num_structures() != 3) throw Error("statement needs the hyperkahler 4-torus");
}

Evaluation dense_eval(const Matrix& x) { return {op_norm(x), hs_norm(x), 0.0, true, 0}; }

Evaluation block_eval(const std::array<Matrix, 3>& blocks) {
  const DirectSum3 d = direct_sum3(blocks[0], blocks[1], blocks[2]);
  double hs2 = 0.0;
  for (const auto& b : blocks) hs2 += b.squaredNorm();
  return {op_norm(d), std::sqrt(hs2), 0.0, true, 0};
}

std::vector<Matrix> quantize_all(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r, int k,
                                 int grid) {
  std::vector<Matrix> out;
  for (const auto& f : fs) out.push_back(toeplitz_of(f, geom, r, k, grid));
  return out;
}

Matrix ik_commutator_residual(const FourierSymbol& f, const FourierSymbol& g, const TorusGeometry& geom, int r, int k,
                              double sign, int grid) {
  const Matrix tf = toeplitz_of(f, geom, r, k, grid), tg = toeplitz_of(g, geom, r, k, grid);
  const Matrix tb = toeplitz_of(poisson_bracket(f, g, geom.kahler_form(r)), geom, r, k, grid);
  return cplx(0.0, sign * k) * commutator(tf, tg) - tb;
}

Matrix hyp_block(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r, int k, int grid) {
  const auto ts = quantize_all(fs, geom, r, k, grid);
  const FourierSymbol b = bracket4_r(fs[0], fs[1], fs[2], fs[3], geom, r);
  return -0.5 * k * k * gen_commutator(ts) - toeplitz_of(b, geom, r, k, grid);
}

std::array<Matrix, 3> hyp_gencomms(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int k, int grid) {
  std::array<Matrix, 3> g;
  for (int r = 1; r <= 3; ++r) g[r - 1] = gen_commutator(quantize_all(fs, geom, r, k, grid));
  return g;
}

std::array<Matrix, 3> dim4_hyp_targets(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int k, int grid) {
  const FourierSymbol b = bracket4_hyp(fs[0], fs[1], fs[2], fs[3], geom);
  std::array<Matrix, 3> t;
  for (int r = 1; r <= 3; ++r) t[r - 1] = toeplitz_of(b, geom, r, k, grid);
  return t;
}

double dim4_hyp_norm(const std::array<Matrix, 3>& g, const std::array<Matrix, 3>& t, int k, double c) {
  double m = 0.0;
  for (int r = 0; r < 3; ++r) m = std::max(m, op_norm(Matrix(-c * k * k * g[r] - t[r])));
  return m;
}

std::optional<TensorWhich> tensor_kind(const std::string& id) {
  if (id == "tensor_product") return TensorWhich::product;
  if (id == "tensor_triple_comm") return TensorWhich::triple_comm;
  if (id == "tensor_comm") return TensorWhich::comm;
  if (id == "tensor_comm_norm") return TensorWhich::comm_norm;
  if (id == "tensor_gencomm_norm") return TensorWhich::gencomm_norm;
  if (id == "tensor_prop4") return TensorWhich::prop4;
  if (id == "tensor_W") return TensorWhich::W;
  return std::nullopt;
}

}  // namespace

double resid_bt_commutator(const FourierSymbol& f, const FourierSymbol& g, const TorusGeometry& geom, int r, int k,
                           double ik_sign) {
  return op_norm(ik_commutator_residual(f, g, geom, r, k, ik_sign, 0));
}

double resid_bt_product(const FourierSymbol& f, const FourierSymbol& g, const TorusGeometry& geom, int r, int k) {
  return op_norm(Matrix(toeplitz_of(f, geom, r, k) * toeplitz_of(g, geom, r, k) - toeplitz_of(f * g, geom, r, k)));
}

std::pair<double, double> resid_norm_bound(const FourierSymbol& f, const TorusGeometry& geom, int r, int k) {
  const double t = op_norm(toeplitz_of(f, geom, r, k));
  const double s = sup_norm(f);
  return {t - s, s - t};
}

double resid_volform(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r, int k, double ik_sign) {
  EvalOptions o;
  o.ik_sign = ik_sign;
  return evaluate_theorem(geom.dim() == 2 ? "volform_n1" : "volform_n2", fs, geom, r, k, o).residual;
}

double resid_nambu_commute(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r, int k) {
  return op_norm(gen_commutator(quantize_all(fs, geom, r, k, 0)));
}

double resid_hyp_fourfn(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                        const TorusGeometry& geom, int r, int k) {
  const std::array<FourierSymbol, 4> fs{f, g, h, t};
  return op_norm(hyp_block(fs, geom, r, k, 0));
}

double resid_directsum(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                       const TorusGeometry& geom, int k) {
  const std::array<FourierSymbol, 4> fs{f, g, h, t};
  return evaluate_theorem("directsum", fs, geom, 0, k).residual;
}

double resid_directsum_commute(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                               const FourierSymbol& t, const TorusGeometry& geom, int k) {
  const std::array<FourierSymbol, 4> fs{f, g, h, t};
  return evaluate_theorem("directsum_commute", fs, geom, 0, k).residual;
}

double resid_dim4(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                  const TorusGeometry& geom, int k) {
  const std::array<FourierSymbol, 4> fs{f, g, h, t};
  return evaluate_theorem("dim4", fs, geom, 0, k).residual;
}

double resid_dim4_hyp(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                      const TorusGeometry& geom, int k, double c) {
  const std::array<FourierSymbol, 4> fs{f, g, h, t};
  EvalOptions o;
  o.dim4_c = c;
  return evaluate_theorem("dim4_hyp", fs, geom, 0, k, o).residual;
}

double best_dim4_c(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                   const TorusGeometry& geom, int k) {
  need_t4(geom);
  const std::array<FourierSymbol, 4> fs{f, g, h, t};
  const auto gc = hyp_gencomms(fs, geom, k, 0);
  const auto tt = dim4_hyp_targets(fs, geom, k, 0);
  // The residual is a norm of an affine function of c, hence convex.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.1, b = 10.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = dim4_hyp_norm(gc, tt, k, x1), f2 = dim4_hyp_norm(gc, tt, k, x2);
  while (b - a > 1e-7) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = dim4_hyp_norm(gc, tt, k, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = dim4_hyp_norm(gc, tt, k, x2);
    }
  }
  return 0.5 * (a + b);
}

Evaluation evaluate_theorem(const std::string& id, std::span<const FourierSymbol> fs, const TorusGeometry& geom, int r,
                            int k, const EvalOptions& opts) {
  const TheoremInfo& info = theorem_info(id);
  need_arity(fs, static_cast<std::size_t>(info.arity));
  if (k < 1) throw Error("level k must be positive");
  for (const auto& f : fs)
    if (f.dim() != geom.dim()) throw Error("symbol dimension does not match the geometry");
  switch (info.domain) {
    case Domain::t2:
      if (geom.dim() != 2) throw Error(id + " runs on the 2-torus");
      break;
    case Domain::t4_single:
    case Domain::t4_all:
      need_t4(geom);
      break;
    case Domain::surface:
      break;
  }
  if (info.domain != Domain::t4_all && (r < 1 || r > geom.num_structures()))
    throw Error("complex structure index out of range");
  const int grid = opts.grid_nodes;

  if (auto which = tensor_kind(id)) return resid_tensor(*which, fs, geom, k, opts);

  if (id == "bt_commutator" || id == "volform_n1")
    return dense_eval(ik_commutator_residual(fs[0], fs[1], geom, r, k, opts.ik_sign, grid));
  if (id == "bt_product")
    return dense_eval(toeplitz_of(fs[0], geom, r, k, grid) * toeplitz_of(fs[1], geom, r, k, grid) -
                      toeplitz_of(fs[0] * fs[1], geom, r, k, grid));
  if (id == "bt_norm_bound") {
    const double t = op_norm(toeplitz_of(fs[0], geom, r, k, grid));
    const double s = sup_norm(fs[0]);
    Evaluation e;
    e.residual = s - t;
    e.hs = e.residual;
    e.aux = t - s;
    return e;
  }
  if (id == "volform_n2") {
    const Matrix g = gen_commutator(quantize_all(fs, geom, r, k, grid));
    const FourierSymbol b = nambu_bracket_det(fs, geom.liouville(r));
    // (ik)^2 / 2!
    return dense_eval(-0.5 * k * k * g - toeplitz_of(b, geom, r, k, grid));
  }
  if (id == "nambu_commute_n1" || id == "nambu_commute_n2")
    return dense_eval(gen_commutator(quantize_all(fs, geom, r, k, grid)));
  if (id == "hyp_fourfn") return dense_eval(hyp_block(fs, geom, r, k, grid));
  if (id == "directsum") {
    std::array<Matrix, 3> blocks;
    for (int s = 1; s <= 3; ++s) blocks[s - 1] = hyp_block(fs, geom, s, k, grid);
    return block_eval(blocks);
  }
  if (id == "directsum_commute") return block_eval(hyp_gencomms(fs, geom, k, grid));
  if (id == "dim4") {
    const FourierSymbol b = nambu_bracket_det(fs, geom.hyper_volume());
    const auto g = hyp_gencomms(fs, geom, k, grid);
    std::array<Matrix, 3> blocks;
    for (int s = 1; s <= 3; ++s) {
      const Matrix tmu = toeplitz_of(FourierSymbol::constant(4, geom.mu(s)), geom, s, k, grid);
      blocks[s - 1] = -0.5 * k * k * g[s - 1] - toeplitz_of(b, geom, s, k, grid) * tmu;
    }
    return block_eval(blocks);
  }
  if (id == "dim4_hyp") {
    const auto g = hyp_gencomms(fs, geom, k, grid);
    const auto t = dim4_hyp_targets(fs, geom, k, grid);
    std::array<Matrix, 3> blocks;
    for (int s = 0; s < 3; ++s) blocks[s] = -opts.dim4_c * k * k * g[s] - t[s];
    return block_eval(blocks);
  }
  throw Error("no evaluator for theorem '" + id + "'");
}

SymbolTuple seeded_tuple(std::uint64_t seed, int arity, int dim, int max_freq) {
  SymbolTuple t;
  t.seed = seed;
  t.descriptor = "random:" + std::to_string(seed) + ":" + std::to_string(max_freq) + "x" + std::to_string(arity);
  for (int i = 0; i < arity; ++i)
    t.symbols.push_back(random_symbol(seed * 1000003ULL + static_cast<std::uint64_t>(i), dim, max_freq, true));
  return t;
}

double detect_ik_sign(const std::string& id, std::span<const FourierSymbol> symbols, const TorusGeometry& geom, int r,
                      int k, const EvalOptions& opts) {
  EvalOptions plus = opts, minus = opts;
  plus.ik_sign = 1.0;
  minus.ik_sign = -1.0;
  const double rp = evaluate_theorem(id, symbols, geom, r, k, plus).residual;
  const double rm = evaluate_theorem(id, symbols, geom, r, k, minus).residual;
  return rm < rp ? -1.0 : 1.0;
}

void finalize_series(ResidualSeries& s, const TheoremInfo& info) {
  std::vector<double> res;
  s.converged = true;
  s.max_scaled = 0.0;
  const int p = info.rate == RateClass::inv_k ? 1 : 2;
  bool bound_ok = true;
  for (std::size_t i = 0; i < s.ks.size(); ++i) {
    const auto& v = s.values[i];
    res.push_back(v.residual);
    s.converged = s.converged && v.converged;
    s.max_scaled = std::max(s.max_scaled, std::pow(static_cast<double>(s.ks[i]), p) * std::abs(v.residual));
    if (info.id == "bt_norm_bound" && (v.aux > 1e-6 || v.residual < -1e-6)) bound_ok = false;
  }
  s.all_zero = std::all_of(res.begin(), res.end(), [](double x) { return std::abs(x) < kZeroResidual; });
  s.fitted = false;
  s.note.clear();
  if (s.all_zero) {
    s.pass = bound_ok;
    s.note = "identically zero";
  } else {
    try {
      s.fit = fit_rate(s.ks, res);
      s.fitted = true;
      s.pass = s.fit.slope <= slope_threshold(info.rate) && s.fit.r2 >= kMinR2 && bound_ok;
    } catch (const Error& e) {
      s.pass = false;
      s.note = e.what();
    }
  }
  if (!bound_ok) s.note = "norm bound violated";
  if (!s.converged) {
    s.pass = false;
    s.note = "norm iteration did not converge";
  }
}

}  // namespace nambu
