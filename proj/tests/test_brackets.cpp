#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nambu/geometry.hpp"
#include "nambu/permutations.hpp"

using namespace nambu;

namespace {

double rel(const FourierSymbol& a, const FourierSymbol& b) {
  const double s = std::max({a.max_abs_coeff(), b.max_abs_coeff(), 1.0});
  return coeff_distance(a, b) / s;
}

FourierSymbol rs(std::uint64_t seed, int dim) { return random_symbol(seed, dim, 2, true); }

}  // namespace

TEST_CASE("Poisson bracket on the 2-torus") {
  const auto geom = TorusGeometry::t2();
  const auto& w = geom.kahler_form(1);
  const auto f = preset_symbol("cos1", 2), g = preset_symbol("cos2", 2);
  const auto expect = kTwoPi * sym_mul(preset_symbol("sin1", 2), preset_symbol("sin2", 2));
  CHECK(coeff_distance(poisson_bracket(f, g, w), expect) < 1e-12);
  CHECK(poisson_bracket(f, FourierSymbol::constant(2, 1.0), w).is_zero());
}

TEST_CASE("Poisson tensor reproduces the Darboux formula") {
  const auto w = ConstantSymplecticForm::darboux(4);
  const auto f = random_symbol(1, 4, 2, false), g = random_symbol(2, 4, 2, false);
  FourierSymbol expect(4);
  for (int j = 0; j < 4; j += 2)
    expect += sym_mul(partial_derivative(f, j), partial_derivative(g, j + 1)) -
              sym_mul(partial_derivative(f, j + 1), partial_derivative(g, j));
  CHECK(rel(poisson_bracket(f, g, w), expect) < 1e-13);
}

TEST_CASE("Poisson bracket is antisymmetric, Leibniz, Jacobi") {
  const auto geom = TorusGeometry::t4();
  for (int r = 1; r <= 3; ++r) {
    const auto& w = geom.kahler_form(r);
    const auto f = rs(10 + r, 4), g = rs(20 + r, 4), h = rs(30 + r, 4);
    CHECK(rel(poisson_bracket(f, g, w), -poisson_bracket(g, f, w)) < 1e-12);
    CHECK(rel(poisson_bracket(f, g * h, w), poisson_bracket(f, g, w) * h + g * poisson_bracket(f, h, w)) < 1e-12);
    const auto jac = poisson_bracket(f, poisson_bracket(g, h, w), w) + poisson_bracket(g, poisson_bracket(h, f, w), w) +
                     poisson_bracket(h, poisson_bracket(f, g, w), w);
    CHECK(jac.max_abs_coeff() / std::max(1.0, poisson_bracket(f, poisson_bracket(g, h, w), w).max_abs_coeff()) <
          1e-10);
  }
}

TEST_CASE("determinant bracket equals pairwise formula") {
  const auto geom = TorusGeometry::t4();
  const auto& w = geom.kahler_form(1);
  const auto rho = geom.liouville(1);
  for (int s = 0; s < 5; ++s) {
    std::array<FourierSymbol, 4> fs{rs(100 + 4 * s, 4), rs(101 + 4 * s, 4), rs(102 + 4 * s, 4), rs(103 + 4 * s, 4)};
    const auto det = nambu_bracket_det(fs, rho);
    CHECK(rel(det, nambu_bracket_pairwise(fs, w)) < 1e-10);
    CHECK(rel(nambu_bracket_pairwise(fs, w), bracket4(fs[0], fs[1], fs[2], fs[3], w)) < 1e-10);
  }
  // n = 1 reduces to the Poisson bracket
  const auto t2 = TorusGeometry::t2();
  std::array<FourierSymbol, 2> pair{rs(7, 2), rs(8, 2)};
  CHECK(rel(nambu_bracket_pairwise(pair, t2.kahler_form(1)), poisson_bracket(pair[0], pair[1], t2.kahler_form(1))) <
        1e-13);
  CHECK(rel(nambu_bracket_det(pair, t2.liouville(1)), poisson_bracket(pair[0], pair[1], t2.kahler_form(1))) < 1e-13);
}

TEST_CASE("determinant bracket: constant and repeated slots, wrong arity") {
  const auto geom = TorusGeometry::t4();
  const auto rho = geom.hyper_volume();
  const auto f = rs(1, 4), g = rs(2, 4), h = rs(3, 4);
  std::array<FourierSymbol, 4> c{f, g, FourierSymbol::constant(4, 2.0), h};
  CHECK(nambu_bracket_det(c, rho).max_abs_coeff() < 1e-12);
  std::array<FourierSymbol, 4> rep{f, g, f, h};
  CHECK(nambu_bracket_det(rep, rho).max_abs_coeff() < 1e-9);
  std::array<FourierSymbol, 3> three{f, g, h};
  CHECK_THROWS_AS(nambu_bracket_det(three, rho), Error);
}

TEST_CASE("hyperkahler four-brackets and their scalings") {
  const auto geom = TorusGeometry::t4();
  const auto rho = geom.hyper_volume();
  for (int s = 0; s < 3; ++s) {
    const auto f = rs(200 + s, 4), g = rs(210 + s, 4), h = rs(220 + s, 4), t = rs(230 + s, 4);
    std::array<FourierSymbol, 4> fs{f, g, h, t};
    const auto det = nambu_bracket_det(fs, rho);
    for (int r = 1; r <= 3; ++r) {
      CHECK(geom.mu(r) == doctest::Approx(6.0));
      CHECK(rel(bracket4_r(f, g, h, t, geom, r), 6.0 * det) < 1e-10);
    }
    CHECK(rel(bracket4_hyp(f, g, h, t, geom), 18.0 * det) < 1e-10);
    // Leibniz in the last slot
    const auto u = rs(240 + s, 4);
    for (int r = 1; r <= 3; ++r)
      CHECK(rel(bracket4_r(f, g, h, t * u, geom, r),
                t * bracket4_r(f, g, h, u, geom, r) + bracket4_r(f, g, h, t, geom, r) * u) < 1e-10);
  }
  const auto f = rs(1, 4);
  CHECK(bracket4_r(f, f, rs(2, 4), FourierSymbol::constant(4, 1.0), geom, 2).is_zero());
  CHECK_THROWS_AS(bracket4_r(f, f, f, f, geom, 4), Error);
}

TEST_CASE("geometry of the 4-torus") {
  const auto geom = TorusGeometry::t4();
  const Eigen::MatrixXi id = Eigen::MatrixXi::Identity(4, 4);
  for (int r = 1; r <= 3; ++r) {
    const auto& j = geom.complex_structure(r);
    CHECK(j * j == -id);
    const Eigen::MatrixXd a = geom.kahler_form(r).matrix();
    // integral after dividing by 2 pi, and omega(u, J u) > 0
    for (int i = 0; i < 4; ++i)
      for (int l = 0; l < 4; ++l) CHECK(std::abs(a(i, l) / kTwoPi - std::round(a(i, l) / kTwoPi)) < 1e-14);
    const Eigen::MatrixXd jd = j.cast<double>();
    for (int s = 0; s < 10; ++s) {
      const Eigen::VectorXd u = Eigen::VectorXd::Random(4);
      CHECK(u.dot(a * (jd * u)) > 0.0);
      // J-invariance
      const Eigen::VectorXd v = Eigen::VectorXd::Random(4);
      CHECK(std::abs((jd * u).dot(a * (jd * v)) - u.dot(a * v)) < 1e-12);
    }
    CHECK(geom.planes(r).size() == 2);
  }
  CHECK(geom.complex_structure(1) * geom.complex_structure(2) == geom.complex_structure(3));
  CHECK(geom.mu(1) == doctest::Approx(6.0));
  CHECK(geom.quaternionic_dim() == 1);
  CHECK_THROWS_AS(geometry_preset("k3"), Error);
}
