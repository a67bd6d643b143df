#include <vector>

#include "nambu/kernels.hpp"

namespace nambu::kernels {

void kron_apply_reference(const KronSum& x, const cplx* in, cplx* out) {
  const auto [n1, n2, n3] = x.dims();
  const Eigen::Index n = n1 * n2 * n3;
  std::vector<cplx> t1(n), t2(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = 0.0;

  for (const auto& term : x.terms()) {
    const Matrix& a = *term.factors[0];
    const Matrix& b = *term.factors[1];
    const Matrix& c = *term.factors[2];
    for (Eigen::Index i1 = 0; i1 < n1; ++i1)
      for (Eigen::Index i2 = 0; i2 < n2; ++i2)
        for (Eigen::Index a3 = 0; a3 < n3; ++a3) {
          cplx s = 0.0;
          for (Eigen::Index j3 = 0; j3 < n3; ++j3) s += c(a3, j3) * in[(i1 * n2 + i2) * n3 + j3];
          t1[(i1 * n2 + i2) * n3 + a3] = s;
        }
    for (Eigen::Index i1 = 0; i1 < n1; ++i1)
      for (Eigen::Index a2 = 0; a2 < n2; ++a2)
        for (Eigen::Index i3 = 0; i3 < n3; ++i3) {
          cplx s = 0.0;
          for (Eigen::Index j2 = 0; j2 < n2; ++j2) s += b(a2, j2) * t1[(i1 * n2 + j2) * n3 + i3];
          t2[(i1 * n2 + a2) * n3 + i3] = s;
        }
    for (Eigen::Index a1 = 0; a1 < n1; ++a1)
      for (Eigen::Index i2 = 0; i2 < n2; ++i2)
        for (Eigen::Index i3 = 0; i3 < n3; ++i3) {
          cplx s = 0.0;
          for (Eigen::Index j1 = 0; j1 < n1; ++j1) s += a(a1, j1) * t2[(j1 * n2 + i2) * n3 + i3];
          out[(a1 * n2 + i2) * n3 + i3] += term.coeff * s;
        }
  }
}

Matrix plane_monomial_reference(int k, int n_g, int mx, int my) {
  Matrix p = Matrix::Zero(k, k);
  Matrix psi(k, n_g);
  for (int j = 0; j < n_g; ++j) {
    const double y = static_cast<double>(j) / n_g;
    psi.setZero();
    const auto range = detail::theta_range(k, y);
    for (long nu = range.lo; nu <= range.hi; ++nu) {
      const double g = detail::theta_gauss(k, y, nu);
      const long a = detail::wrap(nu, k);
      for (int i = 0; i < n_g; ++i) {
        const double x = static_cast<double>(i) / n_g;
        psi(a, i) += g * std::polar(1.0, kTwoPi * static_cast<double>(nu) * x);
      }
    }
    for (int i = 0; i < n_g; ++i) {
      const double x = static_cast<double>(i) / n_g;
      const cplx e = std::polar(1.0, kTwoPi * (mx * x + my * y));
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) p(a, b) += std::conj(psi(a, i)) * e * psi(b, i);
    }
  }
  return p / (static_cast<double>(n_g) * n_g);
}

}  // namespace nambu::kernels
