#pragma once

#include <cmath>

#include "nambu/kron.hpp"

// Hot loops in two flavours: OpenMP-parallel and a plain serial reference kept
// for testing and benchmarking.
namespace nambu::kernels {

/// y = X x for a Kronecker sum. y is overwritten.
void kron_apply(const KronSum& x, const cplx* in, cplx* out);
void kron_apply_reference(const KronSum& x, const cplx* in, cplx* out);

/// Weighted theta-space monomial matrix on one holomorphic plane:
/// P[a][b] = grid sum of conj(psi_a) e(mx x + my y) psi_b over the uniform
/// n_g x n_g grid, psi_j the weighted level-k theta functions (tau = i).
/// The fast version sums the x direction analytically by discrete orthogonality.
Matrix plane_monomial(int k, int n_g, int mx, int my);
Matrix plane_monomial_reference(int k, int n_g, int mx, int my);

/// Gaussian weight truncation: lattice terms with pi k (y + nu/k)^2 > kThetaCut are dropped.
inline constexpr double kThetaCut = 40.0;

}  // namespace nambu::kernels

namespace nambu::kernels::detail {

struct NuRange {
  long lo;
  long hi;
};

/// Lattice indices nu whose weighted theta term survives the cut at height y.
inline NuRange theta_range(int k, double y) {
  const double half = std::sqrt(kThetaCut * k / kPi);
  return {static_cast<long>(std::ceil(-k * y - half)), static_cast<long>(std::floor(-k * y + half))};
}

inline double theta_gauss(int k, double y, long nu) {
  const double t = y + static_cast<double>(nu) / k;
  return std::exp(-kPi * k * t * t);
}

inline long wrap(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace nambu::kernels::detail
