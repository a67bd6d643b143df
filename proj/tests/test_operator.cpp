#include <array>
#include <random>
#include <vector>

#include "doctest.h"
#include "nambu/kernels.hpp"
#include "nambu/kron.hpp"
#include "nambu/norm.hpp"
#include "nambu/permutations.hpp"

using namespace nambu;

namespace {

Matrix rand_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

Matrix naive_direct(const std::vector<Matrix>& ops) {
  const Eigen::Index n = ops[0].rows();
  Matrix out = Matrix::Zero(n, n);
  for_each_permutation(static_cast<int>(ops.size()), [&](const std::vector<int>& p, int sign) {
    Matrix prod = Matrix::Identity(n, n);
    for (int i : p) prod = prod * ops[i];
    out += static_cast<double>(sign) * prod;
  });
  return out;
}

Matrix kron_dense(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("generalized commutator methods agree") {
  std::mt19937_64 rng(1);
  for (int arity : {2, 4, 6}) {
    std::vector<Matrix> ops;
    for (int i = 0; i < arity; ++i) ops.push_back(rand_matrix(rng, 4));
    const Matrix oracle = naive_direct(ops);
    for (auto m : {CommutatorMethod::direct, CommutatorMethod::restricted, CommutatorMethod::halved})
      CHECK(relative_difference(gen_commutator(ops, m), oracle) < 1e-12);
  }
  std::vector<Matrix> odd{rand_matrix(rng, 3), rand_matrix(rng, 3), rand_matrix(rng, 3)};
  CHECK_THROWS_AS(gen_commutator(odd), Error);
  std::vector<Matrix> mixed{rand_matrix(rng, 3), rand_matrix(rng, 4)};
  CHECK_THROWS_AS(gen_commutator(mixed), Error);
}

TEST_CASE("generalized commutator vanishes on identity or repeated slots") {
  std::mt19937_64 rng(2);
  const Matrix a = rand_matrix(rng, 5), b = rand_matrix(rng, 5), c = rand_matrix(rng, 5);
  std::vector<Matrix> with_id{a, b, Matrix::Identity(5, 5), c};
  std::vector<Matrix> rep{a, b, a, c};
  for (auto m : {CommutatorMethod::direct, CommutatorMethod::restricted, CommutatorMethod::halved}) {
    CHECK(gen_commutator(with_id, m).norm() < 1e-10);
    CHECK(gen_commutator(rep, m).norm() < 1e-10);
  }
}

TEST_CASE("generalized commutator is multilinear and alternating") {
  std::mt19937_64 rng(3);
  std::vector<Matrix> ops;
  for (int i = 0; i < 4; ++i) ops.push_back(rand_matrix(rng, 3));
  const Matrix base = gen_commutator(ops);
  auto swapped = ops;
  std::swap(swapped[1], swapped[3]);
  CHECK(relative_difference(gen_commutator(swapped), -base) < 1e-12);
  const Matrix extra = rand_matrix(rng, 3);
  auto lin = ops, alt = ops;
  lin[2] = 2.0 * ops[2] + cplx(0.0, 1.0) * extra;
  alt[2] = extra;
  CHECK(relative_difference(gen_commutator(lin), 2.0 * base + cplx(0.0, 1.0) * gen_commutator(alt)) < 1e-12);
}

TEST_CASE("comm4 expansion") {
  std::mt19937_64 rng(4);
  const Matrix a = rand_matrix(rng, 5), b = rand_matrix(rng, 5), c = rand_matrix(rng, 5), d = rand_matrix(rng, 5);
  CHECK(relative_difference(comm4_expand(a, b, c, d), naive_direct({a, b, c, d})) < 1e-12);
  CHECK(comm4_expand(a, Matrix::Identity(5, 5), c, d).norm() < 1e-10);
  const Matrix da = Vector::Random(5).asDiagonal(), db = Vector::Random(5).asDiagonal();
  CHECK(comm4_expand(da, db, da * db, db * db).norm() < 1e-12);
}

TEST_CASE("Kronecker sums: dense oracle, matvec, products, commutator") {
  std::mt19937_64 rng(5);
  const Matrix a = rand_matrix(rng, 2), b = rand_matrix(rng, 3), c = rand_matrix(rng, 4);
  const auto x = kron3(a, b, c);
  const Matrix dense = kron_dense(kron_dense(a, b), c);
  CHECK((x.dense() - dense).norm() < 1e-12);
  for (Eigen::Index e = 0; e < x.size(); ++e) {
    Vector in = Vector::Zero(x.size()), out(x.size()), ref(x.size());
    in(e) = 1.0;
    x.apply(in, out);
    kernels::kron_apply_reference(x, in.data(), ref.data());
    CHECK((out - dense.col(e)).norm() < 1e-12);
    CHECK((ref - dense.col(e)).norm() < 1e-12);
  }

  const Matrix a2 = rand_matrix(rng, 2), b2 = rand_matrix(rng, 3), c2 = rand_matrix(rng, 4);
  KronSum y = kron3(a2, b2, c2);
  y += cplx(0.5, -1.0) * kron3(a, b2, c);
  const Matrix yd = y.dense();
  CHECK((kron_product(x, y).dense() - dense * yd).norm() < 1e-10 * dense.norm() * yd.norm());
  CHECK(kron_product(x, kron3(Matrix::Identity(2, 2), Matrix::Identity(3, 3), Matrix::Identity(4, 4))).num_terms() ==
        1);
  CHECK(kron_product(x, y).num_terms() == 2);
  CHECK((y.adjoint().dense() - yd.adjoint()).norm() < 1e-12);

  const auto yk = kron3(a2, b2, c2);
  const Matrix comm = kron_commutator(x, yk).dense();
  const Matrix yk_d = yk.dense();
  CHECK((comm - (dense * yk_d - yk_d * dense)).norm() < 1e-12 * dense.norm() * yk_d.norm());
  CHECK(kron_commutator(x, x).dense().norm() < 1e-12 * dense.norm() * dense.norm());
  CHECK_THROWS_AS(kron_commutator(x, y), Error);
  CHECK_THROWS_AS(kron_product(x, kron3(a, a, a)), Error);

  // merging exact duplicates
  KronSum dup = x;
  dup += x;
  CHECK(dup.merged().num_terms() == 1);
  CHECK((dup.merged().dense() - 2.0 * dense).norm() < 1e-12);
}

TEST_CASE("Kronecker generalized commutator matches dense") {
  std::mt19937_64 rng(6);
  std::vector<KronSum> xs;
  std::vector<Matrix> ds;
  for (int i = 0; i < 4; ++i) {
    xs.push_back(kron3(rand_matrix(rng, 2), rand_matrix(rng, 2), rand_matrix(rng, 3)));
    ds.push_back(xs.back().dense());
  }
  const Matrix expect = gen_commutator(ds, CommutatorMethod::direct);
  CHECK(relative_difference(kron_gen_commutator(xs).dense(), expect) < 1e-12);
}

TEST_CASE("three-factor inequality") {
  std::mt19937_64 rng(7);
  for (int s = 0; s < 20; ++s) {
    std::array<Matrix, 3> m, n;
    for (int i = 0; i < 3; ++i) {
      m[i] = rand_matrix(rng, 3);
      n[i] = m[i] + 0.1 * rand_matrix(rng, 3);
    }
    const double lhs = op_norm(Matrix(kron3(m[0], m[1], m[2]).dense() - kron3(n[0], n[1], n[2]).dense()));
    const double d1 = op_norm(Matrix(m[0] - n[0])), d2 = op_norm(Matrix(m[1] - n[1])),
                 d3 = op_norm(Matrix(m[2] - n[2]));
    const double rhs = d1 * d2 * d3 + d1 * op_norm(m[1]) * op_norm(n[2]) + op_norm(m[0]) * op_norm(n[1]) * d3 +
                       op_norm(n[0]) * d2 * op_norm(m[2]);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("operator norms") {
  CHECK(op_norm(Matrix(Matrix::Identity(7, 7))) == doctest::Approx(1.0));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  CHECK(op_norm(d) == doctest::Approx(3.0));

  std::mt19937_64 rng(8);
  const Matrix a = rand_matrix(rng, 3), b = rand_matrix(rng, 4), c = rand_matrix(rng, 2);
  CHECK(op_norm(direct_sum3(a, b, c)) == doctest::Approx(std::max({op_norm(a), op_norm(b), op_norm(c)})));
  CHECK(op_norm(direct_sum3(a, b, c).dense()) == doctest::Approx(op_norm(direct_sum3(a, b, c))));
  const auto single = kron3(a, rand_matrix(rng, 3), rand_matrix(rng, 3));
  CHECK(op_norm(single).value == doctest::Approx(op_norm(single.dense())).epsilon(1e-10));

  for (int s = 0; s < 3; ++s) {
    KronSum x = kron3(rand_matrix(rng, 3), rand_matrix(rng, 3), rand_matrix(rng, 3));
    x += kron3(rand_matrix(rng, 3), rand_matrix(rng, 3), rand_matrix(rng, 3));
    const auto r = op_norm(x, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - op_norm(x.dense())) < 1e-9 * op_norm(x.dense()));
    CHECK(hs_norm(x) == doctest::Approx(x.dense().norm()).epsilon(1e-12));
  }
  CHECK(op_norm(KronSum({2, 2, 2})).value == 0.0);
  CHECK_THROWS_AS(op_norm(kron3(a, a, a), -1.0), Error);
}

TEST_CASE("Lanczos reports non-convergence") {
  std::mt19937_64 rng(9);
  KronSum x = kron3(rand_matrix(rng, 4), rand_matrix(rng, 4), rand_matrix(rng, 4));
  x += kron3(rand_matrix(rng, 4), rand_matrix(rng, 4), rand_matrix(rng, 4));
  const auto r = op_norm(x, 1e-16, 2);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.value > 0.0);
}
