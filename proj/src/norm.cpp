#include "nambu/norm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace nambu {

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double op_norm(const DirectSum3& a) {
  double m = 0.0;
  for (const auto& b : a.blocks) m = std::max(m, op_norm(b));
  return m;
}

double hs_norm(const Matrix& a) { return a.norm(); }

double hs_norm(const KronSum& x) {
  const auto terms = x.terms();
  const std::size_t n = terms.size();
  // tr(X^* X) = sum_{s,t} conj(c_t) c_s prod_i tr(F_{t,i}^* F_{s,i}).
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      cplx v = std::conj(terms[t].coeff) * terms[s].coeff;
      for (int i = 0; i < 3; ++i)
        v *= (terms[t].factors[i]->conjugate().cwiseProduct(*terms[s].factors[i])).sum();
      total += v.real();
    }
  return std::sqrt(std::max(total, 0.0));
}

NormResult lanczos_largest(const ApplyFn& apply, Eigen::Index n, double tol, int max_iter, std::uint64_t seed) {
  if (tol <= 0.0) throw Error("norm tolerance must be positive");
  if (n == 0) return {0.0, 0, true};
  const int cap = static_cast<int>(std::min<Eigen::Index>(max_iter, n));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(uni(rng), uni(rng));
  v.normalize();

  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  Vector w(n);
  double theta = 0.0;

  for (int j = 1; j <= cap; ++j) {
    basis.push_back(v);
    apply(std::span<const cplx>(v.data(), n), std::span<cplx>(w.data(), n));
    const double a = std::real(v.dot(w));
    alpha.push_back(a);
    w -= a * v;
    if (j > 1) w -= beta.back() * basis[j - 2];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j, j);
    for (int i = 0; i < j; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < j) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()(j - 1);

    const double scale = std::max(std::abs(theta), 1e-300);
    if (b <= 1e-13 * std::max(scale, std::abs(a)) || j == n) return {std::max(theta, 0.0), j, true};
    // ||A y - theta y|| = b |s_j| for the top Ritz pair, so theta is within
    // that distance of an eigenvalue. Stagnation of theta alone is not enough.
    if (b * std::abs(es.eigenvectors()(j - 1, j - 1)) <= tol * scale) return {std::max(theta, 0.0), j, true};
    beta.push_back(b);
    v = w / b;
  }
  return {std::max(theta, 0.0), cap, false};
}

NormResult op_norm(const KronSum& x, double tol, int max_iter) {
  if (tol <= 0.0) throw Error("norm tolerance must be positive");
  if (x.num_terms() == 0) return {0.0, 0, true};
  if (x.num_terms() == 1) {
    const auto& t = x.terms()[0];
    return {std::abs(t.coeff) * op_norm(*t.factors[0]) * op_norm(*t.factors[1]) * op_norm(*t.factors[2]), 0,
            true};
  }
  const KronSum adj = x.adjoint();
  std::vector<cplx> tmp(x.size());
  auto apply = [&](std::span<const cplx> in, std::span<cplx> out) {
    x.apply(in, tmp);
    adj.apply(tmp, out);
  };
  NormResult r = lanczos_largest(apply, x.size(), tol, max_iter);
  r.value = std::sqrt(r.value);
  return r;
}

NormResult op_norm(const StructuredOperator& x, double tol, int max_iter) {
  if (const auto* d = std::get_if<DirectSum3>(&x)) return {op_norm(*d), 0, true};
  return op_norm(std::get<KronSum>(x), tol, max_iter);
}

}  // namespace nambu
