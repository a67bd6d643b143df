#include <cmath>
#include <vector>

#include "doctest.h"
#include "nambu/kernels.hpp"
#include "nambu/norm.hpp"
#include "nambu/toeplitz.hpp"

using namespace nambu;

namespace {

// Closed form of T_{e(mx x + my y)} on one plane in the orthonormal theta frame,
// from the Gaussian integral of two shifted weighted theta terms.
Matrix plane_closed_form(int k, int mx, int my) {
  Matrix t = Matrix::Zero(k, k);
  for (int b = 0; b < k; ++b) {
    const int a = ((b + mx) % k + k) % k;
    t(a, b) = std::exp(-kPi * (mx * mx + my * my) / (2.0 * k)) * std::polar(1.0, -kPi * my * (2.0 * b + mx) / k);
  }
  return t;
}

Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("theta basis dimensions and Gram matrix") {
  const auto t2 = TorusGeometry::t2();
  const auto t4 = TorusGeometry::t4();
  CHECK(build_theta_basis(t2, 1, 1)->dim() == 1);
  const auto b8 = build_theta_basis(t2, 1, 8);
  CHECK(b8->dim() == 8);
  CHECK(b8->gram_rank() == 8);
  CHECK(b8->gram_condition() < 1e3);
  for (int r = 1; r <= 3; ++r) {
    const auto b = build_theta_basis(t4, r, 3);
    CHECK(b->dim() == 9);
    CHECK(b->gram_rank() == 9);
    CHECK(b->gram_condition() < 1e3);
    const Matrix& c = b->orthonormalizer();
    CHECK((c.adjoint() * b->gram() * c - Matrix::Identity(9, 9)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(build_theta_basis(t2, 1, 0), Error);
  CHECK_THROWS_AS(build_theta_basis(t2, 2, 3), Error);
}

TEST_CASE("quasi-periodicity, periodic density, curvature") {
  const auto t4 = TorusGeometry::t4();
  const auto t2 = TorusGeometry::t2();
  for (const auto* geom : {&t2, &t4})
    for (int r = 1; r <= geom->num_structures(); ++r)
      for (int k : {1, 3, 5}) {
        const ThetaBasis basis(*geom, r, k);
        const int d = geom->dim();
        for (int s = 0; s < 4; ++s) {
          std::vector<double> x(d);
          std::vector<int> lam(d);
          for (int i = 0; i < d; ++i) {
            x[i] = 0.13 + 0.21 * i + 0.17 * s;
            lam[i] = ((i + s) % 3) - 1;
          }
          std::vector<double> xl(d);
          for (int i = 0; i < d; ++i) xl[i] = x[i] + lam[i];
          const cplx mult = basis.multiplier(lam, x);
          for (int a = 0; a < basis.dim(); ++a) {
            const cplx sx = basis.evaluate(a, x), sxl = basis.evaluate(a, xl);
            CHECK(std::abs(sxl - mult * sx) <= 1e-9 * std::abs(sxl) + 1e-300);
            const double dens_x = std::exp(-basis.potential(x)) * std::norm(sx);
            const double dens_xl = std::exp(-basis.potential(xl)) * std::norm(sxl);
            CHECK(std::abs(dens_x - dens_xl) <= 1e-9 * dens_x);
          }
          const Eigen::MatrixXd curv = basis.curvature(x);
          const Eigen::MatrixXd expect = k * basis.form_matrix();
          CHECK((curv - expect).cwiseAbs().maxCoeff() < 1e-6);
        }
      }
}

TEST_CASE("plane monomial kernels agree") {
  for (int k : {1, 2, 5, 9})
    for (auto [mx, my] : {std::pair{0, 0}, std::pair{1, -2}, std::pair{-3, 1}, std::pair{2, 2}}) {
      const int n_g = grid_rule(k, 3);
      const Matrix fast = kernels::plane_monomial(k, n_g, mx, my);
      const Matrix ref = kernels::plane_monomial_reference(k, n_g, mx, my);
      CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("Toeplitz of monomials matches the closed form") {
  const auto t2 = TorusGeometry::t2();
  for (int k : {1, 4, 7, 16})
    for (auto [mx, my] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}, std::pair{2, -1}, std::pair{-3, 2}}) {
      const auto f = FourierSymbol::monomial(2, {mx, my, 0, 0});
      const Matrix t = toeplitz_matrix(f, *build_theta_basis(t2, 1, k)).matrix;
      CHECK((t - plane_closed_form(k, mx, my)).cwiseAbs().maxCoeff() < 1e-10);
    }
  // one wrapped diagonal, constant magnitude
  const Matrix t = quantize(FourierSymbol::monomial(2, {1, 2, 0, 0}), t2, 1, 4).matrix;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if ((a - b - 1) % 4 == 0)
        CHECK(std::abs(std::abs(t(a, b)) - std::exp(-kPi * 5.0 / 8.0)) < 1e-10);
      else
        CHECK(std::abs(t(a, b)) < 1e-12);
    }

  // 4-torus: factorizes over the holomorphic planes of each structure
  const auto t4 = TorusGeometry::t4();
  const Freq m{1, -1, 2, 0};
  for (int r = 1; r <= 3; ++r) {
    const auto& pl = t4.planes(r);
    const int k = 3;
    const Matrix expect =
        kron2(plane_closed_form(k, m[pl[0].p], m[pl[0].q]), plane_closed_form(k, m[pl[1].p], m[pl[1].q]));
    const Matrix got = quantize(FourierSymbol::monomial(4, m), t4, r, k).matrix;
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Toeplitz invariants") {
  const auto t2 = TorusGeometry::t2();
  const auto t4 = TorusGeometry::t4();
  const auto one2 = FourierSymbol::constant(2, 1.0);
  const auto one4 = FourierSymbol::constant(4, 1.0);
  CHECK((quantize(one2, t2, 1, 8).matrix - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-8);
  const auto triple = quantize_triple(one4, t4, 3);
  for (const auto& op : triple) CHECK((op.matrix - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-8);

  const auto f = random_symbol(3, 4, 2, true), g = random_symbol(4, 4, 2, true);
  const auto tf = quantize_triple(f, t4, 3), tg = quantize_triple(g, t4, 3);
  const auto tl = quantize_triple(2.0 * f + cplx(0.0, 3.0) * g, t4, 3);
  for (int r = 0; r < 3; ++r) {
    CHECK((tf[r].matrix - tf[r].matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((tl[r].matrix - 2.0 * tf[r].matrix - cplx(0.0, 3.0) * tg[r].matrix).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(op_norm(tf[r].matrix) <= sup_norm(f) + 1e-6);
  }

  // grid doubling
  const auto basis = build_theta_basis(t2, 1, 8);
  const auto h = random_symbol(5, 2, 2, true);
  const auto coarse = toeplitz_matrix(h, *basis, grid_for(8, 2)).matrix;
  const auto fine = toeplitz_matrix(h, *basis, {2 * grid_rule(8, 2)}).matrix;
  CHECK((coarse - fine).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(toeplitz_matrix(h, *basis, {16}), Error);
  CHECK_THROWS_AS(toeplitz_matrix(one4, *basis), Error);
  CHECK_THROWS_AS(quantize_triple(h, t2, 2), Error);
}

TEST_CASE("norms are invariant under a permuted and rescaled basis") {
  const auto t4 = TorusGeometry::t4();
  const int k = 3;
  BasisOptions opts;
  for (int a = 0; a < 9; ++a) {
    opts.permutation.push_back((5 * a + 2) % 9);
    opts.scale.push_back(0.5 + 0.25 * a);
  }
  const ThetaBasis plain(t4, 2, k), shuffled(t4, 2, k, opts);
  CHECK(shuffled.gram_rank() == 9);
  const auto f = random_symbol(7, 4, 2, true), g = random_symbol(8, 4, 2, true);
  const Matrix a1 = toeplitz_matrix(f, plain).matrix, b1 = toeplitz_matrix(g, plain).matrix;
  const Matrix a2 = toeplitz_matrix(f, shuffled).matrix, b2 = toeplitz_matrix(g, shuffled).matrix;
  CHECK(std::abs(op_norm(a1) - op_norm(a2)) < 1e-9);
  CHECK(std::abs(op_norm(Matrix(a1 * b1 - b1 * a1)) - op_norm(Matrix(a2 * b2 - b2 * a2))) < 1e-9);
}
