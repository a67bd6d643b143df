#include <cmath>
#include <vector>

#include "doctest.h"
#include "nambu/experiments.hpp"
#include "nambu/fit.hpp"

using namespace nambu;

// Monomial residuals have closed forms: on a holomorphic plane
// T_{e_m} T_{e_n} = exp(pi (m.n + i m^n) / k) T_{e_{m+n}} and ||T_{e_m}|| = exp(-pi |m|^2 / 2k).

TEST_CASE("fit_rate recovers exact power laws") {
  const std::vector<int> ks{2, 4, 8, 16, 32};
  std::vector<double> a, b;
  for (int k : ks) {
    a.push_back(5.0 / k);
    b.push_back(2.0 / (double(k) * k));
  }
  const FitResult fa = fit_rate(ks, a), fb = fit_rate(ks, b);
  CHECK(fa.slope == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(fb.slope == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(fa.r2 == doctest::Approx(1.0));
  CHECK(fa.points == 4);

  std::vector<double> c = a;
  c[2] = 1e-14;
  CHECK_THROWS_AS(fit_rate(ks, c), Error);  // three usable points left
  const FitResult fc = fit_rate(ks, c, false);
  CHECK(fc.excluded_ks == std::vector<int>{8});
  CHECK(fc.slope == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("product residual of a single mode on the 2-torus") {
  const auto g = TorusGeometry::t2();
  const FourierSymbol e1 = preset_symbol("exp1", 2);
  for (int k : {8, 12, 32}) {
    const double want = (std::exp(kPi / k) - 1.0) * std::exp(-2.0 * kPi / k);
    CHECK(resid_bt_product(e1, e1, g, 1, k) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("commutator residual of orthogonal modes is second order") {
  const auto g = TorusGeometry::t2();
  const std::vector<FourierSymbol> fs{preset_symbol("exp1", 2), preset_symbol("exp2", 2)};
  const double sign = detect_ik_sign("bt_commutator", fs, g, 1, 8);
  for (int k : {8, 16, 24}) {
    const double want = std::abs(2.0 * kPi - 2.0 * k * std::sin(kPi / k)) * std::exp(-kPi / k);
    CHECK(resid_bt_commutator(fs[0], fs[1], g, 1, k, sign) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("four-bracket residuals of axis modes on the 4-torus") {
  const auto g = TorusGeometry::t4();
  std::vector<FourierSymbol> fs;
  for (const char* n : {"exp1", "exp2", "exp3", "exp4"}) fs.push_back(preset_symbol(n, 4));
  for (int k : {4, 6, 9}) {
    const double s2 = std::pow(std::sin(kPi / k), 2), damp = std::exp(-2.0 * kPi / k);
    const double vol = 4.0 * damp * (kPi * kPi - double(k) * k * s2);
    CHECK(resid_volform(fs, g, 1, k) == doctest::Approx(vol).epsilon(1e-8));
    CHECK(resid_nambu_commute(fs, g, 1, k) == doctest::Approx(8.0 * s2 * damp).epsilon(1e-8));
  }
}

TEST_CASE("tensor product residual of a repeated mode") {
  const auto g = TorusGeometry::t4();
  const std::vector<FourierSymbol> fs{preset_symbol("exp1", 4), preset_symbol("exp1", 4)};
  for (int k : {2, 4, 6}) {
    const double want = (std::exp(3.0 * kPi / k) - 1.0) * std::exp(-6.0 * kPi / k);
    CHECK(resid_tensor(TensorWhich::product, fs, g, k).residual == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("trivial slots give zero residuals") {
  const auto g4 = TorusGeometry::t4();
  const auto tup = seeded_tuple(7, 4, 4);
  std::vector<FourierSymbol> fs = tup.symbols;
  fs[3] = FourierSymbol::constant(4, 1.0);
  CHECK(evaluate_theorem("hyp_fourfn", fs, g4, 2, 4).residual < 1e-10);
  CHECK(evaluate_theorem("directsum_commute", fs, g4, 0, 4).residual < 1e-10);
  CHECK(resid_tensor(TensorWhich::W, fs, g4, 2).residual < 1e-10);

  const auto g2 = TorusGeometry::t2();
  const auto pair = seeded_tuple(3, 2, 2);
  const std::vector<FourierSymbol> same{pair.symbols[0], pair.symbols[0]};
  CHECK(evaluate_theorem("bt_commutator", same, g2, 1, 8).residual < 1e-10);
}

TEST_CASE("structured tensor norms agree with dense materialization") {
  const auto g = TorusGeometry::t4();
  const auto tup = seeded_tuple(11, 4, 4);
  EvalOptions dense;
  dense.dense_tensor = true;
  for (auto which : {TensorWhich::W, TensorWhich::gencomm_norm, TensorWhich::prop4}) {
    for (int k : {2, 3}) {
      const Evaluation a = resid_tensor(which, tup.symbols, g, k), b = resid_tensor(which, tup.symbols, g, k, dense);
      CHECK(a.converged);
      CHECK(std::abs(a.residual - b.residual) <= 1e-8 * std::max(1.0, b.residual));
    }
  }
}

TEST_CASE("series bookkeeping") {
  const TheoremInfo& info = theorem_info("bt_product");
  ResidualSeries s;
  s.ks = {8, 12, 16, 24, 32};
  for (std::size_t i = 0; i < s.ks.size(); ++i) s.values.push_back({0.0});
  finalize_series(s, info);
  CHECK(s.all_zero);
  CHECK(s.pass);

  for (std::size_t i = 0; i < s.ks.size(); ++i) s.values[i].residual = 3.0 / s.ks[i];
  finalize_series(s, info);
  CHECK(s.pass);
  s.values[2].converged = false;
  finalize_series(s, info);
  CHECK_FALSE(s.pass);
  CHECK_THROWS_AS(theorem_info("no_such_theorem"), Error);
}
