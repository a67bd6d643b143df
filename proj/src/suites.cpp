#include "nambu/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "nambu/geometry.hpp"
#include "nambu/kron.hpp"
#include "nambu/norm.hpp"
#include "nambu/toeplitz.hpp"

namespace nambu {

void Check::record(double err) {
  worst = count == 0 ? err : std::max(worst, err);
  ++count;
}

bool SuiteReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

Check& SuiteReport::check(const std::string& n, double tol) {
  for (auto& c : checks)
    if (c.name == n) return c;
  checks.push_back({n, 0.0, tol, 0});
  return checks.back();
}

std::string SuiteReport::summary() const {
  std::string out;
  char line[256];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "  %-4s %-34s worst %.3e  tol %.0e  (%d checks)\n", c.pass() ? "ok" : "FAIL",
                  c.name.c_str(), c.worst, c.tol, c.count);
    out += line;
  }
  std::snprintf(line, sizeof line, "%s: %s in %.2fs\n", name.c_str(), pass() ? "pass" : "FAIL", seconds);
  return out + line;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Matrix random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cplx(nd(rng), nd(rng));
  return a;
}

Matrix kron_dense(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Error of a multilinear expression relative to the product of its input
// norms. Relative to the output it is meaningless when the output vanishes
// identically (the standard polynomial of degree 2n on n x n matrices).
double multilinear_error(const Matrix& a, const Matrix& b, std::span<const Matrix> ins) {
  double scale = 1.0;
  for (const auto& x : ins) scale *= x.norm();
  return (a - b).norm() / scale;
}

double rel(const FourierSymbol& a, const FourierSymbol& b) {
  const double s = std::max({a.max_abs_coeff(), b.max_abs_coeff(), 1.0});
  return coeff_distance(a, b) / s;
}

}  // namespace

SuiteReport identity_suite(std::uint64_t seed, int trials, bool inject_fault) {
  if (trials < 1) throw Error("trials must be positive");
  const auto t0 = Clock::now();
  SuiteReport rep{"identities", {}, 0.0};
  constexpr double tol = 1e-10;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed * 1000003ull + static_cast<std::uint64_t>(t));
    const int n = 2 + t % 5;
    const int arity = 2 + 2 * (t % 3);
    std::vector<Matrix> ops;
    for (int j = 0; j < 6; ++j) ops.push_back(random_matrix(rng, n));

    const std::span<const Matrix> args(ops.data(), arity);
    const Matrix direct = gen_commutator(args, CommutatorMethod::direct);
    rep.check("gencomm restricted = direct", tol)
        .record(multilinear_error(direct, gen_commutator(args, CommutatorMethod::restricted), args));
    rep.check("gencomm halved = direct", tol)
        .record(multilinear_error(direct, gen_commutator(args, CommutatorMethod::halved), args));

    const std::span<const Matrix> four(ops.data(), 4);
    Matrix expand = comm4_expand(ops[0], ops[1], ops[2], ops[3]);
    if (inject_fault) expand += 2.0 * commutator(ops[0], ops[2]) * commutator(ops[1], ops[3]);
    rep.check("4-bracket expansion = direct", tol)
        .record(multilinear_error(gen_commutator(four, CommutatorMethod::direct), expand, four));

    // [A1 (x) A2 (x) A3, B1 (x) B2 (x) B3] via the four-term identity
    const KronSum x = kron3(ops[0], ops[1], ops[2]), y = kron3(ops[3], ops[4], ops[5]);
    const Matrix xa = kron_dense(kron_dense(ops[0], ops[1]), ops[2]);
    const Matrix ya = kron_dense(kron_dense(ops[3], ops[4]), ops[5]);
    rep.check("tensor commutator identity", tol)
        .record(relative_difference(kron_commutator(x, y).dense(), commutator(xa, ya)));
  }
  rep.seconds = since(t0);
  return rep;
}

SuiteReport bracket_suite(std::uint64_t seed, int trials, bool inject_fault) {
  if (trials < 1) throw Error("trials must be positive");
  const auto t0 = Clock::now();
  SuiteReport rep{"brackets", {}, 0.0};
  constexpr double tol = 1e-9;
  const auto t2 = TorusGeometry::t2();
  const auto t4 = TorusGeometry::t4();
  const VolumeDensity hyp = t4.hyper_volume();

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t base = seed * 1000003ull + 16ull * static_cast<std::uint64_t>(t);
    auto s2 = [&](int i) { return random_symbol(base + i, 2, 2, true); };
    auto s4 = [&](int i) { return random_symbol(base + i, 4, 2, true); };
    const int r = 1 + t % 3;
    const auto& w2 = t2.kahler_form(1);
    const auto& w4 = t4.kahler_form(r);

    {
      const auto f = s2(0), g = s2(1), h = s2(2);
      rep.check("Poisson antisymmetry", tol).record(rel(poisson_bracket(f, g, w2), -poisson_bracket(g, f, w2)));
      FourierSymbol leib = poisson_bracket(f, g, w2) * h + g * poisson_bracket(f, h, w2);
      if (inject_fault) leib -= 2.0 * g * poisson_bracket(f, h, w2);
      rep.check("Poisson Leibniz", tol).record(rel(poisson_bracket(f, g * h, w2), leib));
      const auto jac = poisson_bracket(f, poisson_bracket(g, h, w2), w2) +
                       poisson_bracket(g, poisson_bracket(h, f, w2), w2) +
                       poisson_bracket(h, poisson_bracket(f, g, w2), w2);
      rep.check("Jacobi (2-torus)", tol).record(rel(jac, FourierSymbol(2)));
    }

    std::vector<FourierSymbol> fs;
    for (int i = 0; i < 8; ++i) fs.push_back(s4(3 + i));
    const auto& f = fs[0];
    const auto& g = fs[1];
    const auto& h = fs[2];
    const auto& u = fs[3];
    {
      const auto jac = poisson_bracket(f, poisson_bracket(g, h, w4), w4) +
                       poisson_bracket(g, poisson_bracket(h, f, w4), w4) +
                       poisson_bracket(h, poisson_bracket(f, g, w4), w4);
      rep.check("Jacobi (4-torus)", tol).record(rel(jac, FourierSymbol(4)));
      rep.check("Poisson antisymmetry", tol).record(rel(poisson_bracket(f, g, w4), -poisson_bracket(g, f, w4)));
    }

    const FourierSymbol b = bracket4_r(f, g, h, u, t4, r);
    {
      // the six transpositions of four slots, cycled over trials
      static constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
      std::array<FourierSymbol, 4> sw{f, g, h, u};
      std::swap(sw[kPairs[t % 6][0]], sw[kPairs[t % 6][1]]);
      rep.check("4-bracket antisymmetry", tol).record(rel(bracket4_r(sw[0], sw[1], sw[2], sw[3], t4, r), -b));
      const std::array<FourierSymbol, 4> orig{f, g, h, u};
      rep.check("determinant antisymmetry", tol).record(rel(nambu_bracket_det(sw, hyp), -nambu_bracket_det(orig, hyp)));
      rep.check("determinant = pairwise", tol)
          .record(rel(nambu_bracket_det(orig, t4.liouville(r)), nambu_bracket_pairwise(orig, w4)));
      rep.check("pairwise = four-bracket expansion", tol).record(rel(nambu_bracket_pairwise(orig, w4), b));
      rep.check("{.}_r = 6 {.}", tol).record(rel(b, 6.0 * nambu_bracket_det(orig, hyp)));
      rep.check("{.}_hyp = 3 {.}_r", tol).record(rel(bracket4_hyp(f, g, h, u, t4), 3.0 * b));
    }
    {
      const auto& s = fs[4];
      rep.check("4-bracket Leibniz", tol)
          .record(rel(bracket4_r(f, g, h, u * s, t4, r), u * bracket4_r(f, g, h, s, t4, r) + b * s));
    }

    {
      const VolumeDensity rho = t4.liouville(1);
      auto det4 = [&](const FourierSymbol& a, const FourierSymbol& bb, const FourierSymbol& c, const FourierSymbol& d) {
        const std::array<FourierSymbol, 4> q{a, bb, c, d};
        return nambu_bracket_det(q, rho);
      };
      const std::array<FourierSymbol, 3> outer{s4(11), s4(12), s4(13)};
      const std::array<FourierSymbol, 4> in{fs[4], fs[5], fs[6], fs[7]};
      const FourierSymbol lhs = det4(outer[0], outer[1], outer[2], det4(in[0], in[1], in[2], in[3]));
      FourierSymbol rhs(4);
      for (int i = 0; i < 4; ++i) {
        std::array<FourierSymbol, 4> q = in;
        q[i] = det4(outer[0], outer[1], outer[2], in[i]);
        rhs += det4(q[0], q[1], q[2], q[3]);
      }
      rep.check("fundamental identity", tol).record(rel(lhs, rhs));
    }
  }
  rep.seconds = since(t0);
  return rep;
}

SuiteReport quantization_suite(std::uint64_t seed, const std::vector<int>& ks2, const std::vector<int>& ks4) {
  const auto t0 = Clock::now();
  SuiteReport rep{"quantization", {}, 0.0};
  const auto t2 = TorusGeometry::t2();
  const auto t4 = TorusGeometry::t4();

  auto run = [&](const TorusGeometry& geom, int r, int k) {
    const int d = geom.dim();
    const auto basis = cached_basis(geom, r, k);
    const Eigen::Index n = basis->dim();
    const Matrix one = toeplitz_matrix(FourierSymbol::constant(d, 1.0), *basis).matrix;
    rep.check("T_1 = I", 1e-8).record((one - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());

    const FourierSymbol f = random_symbol(seed * 1000003ull + 97ull * k + r, d, 2, true);
    const Matrix tf = toeplitz_matrix(f, *basis).matrix;
    rep.check("hermitian for real f", 1e-9).record((tf - tf.adjoint()).cwiseAbs().maxCoeff());
    rep.check("||T_f|| - |f|_inf", 1e-6).record(op_norm(tf) - sup_norm(f));
    const Matrix fine = toeplitz_matrix(f, *basis, {2 * grid_rule(k, f.max_freq())}).matrix;
    rep.check("grid doubling", 1e-8).record((tf - fine).cwiseAbs().maxCoeff());
  };

  for (int k : ks2) run(t2, 1, k);
  for (int k : ks4)
    for (int r = 1; r <= 3; ++r) run(t4, r, k);
  rep.seconds = since(t0);
  return rep;
}

}  // namespace nambu
