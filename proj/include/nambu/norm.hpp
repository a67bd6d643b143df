#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "nambu/kron.hpp"

namespace nambu {

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Largest singular value.
double op_norm(const Matrix& a);
/// max of block norms.
double op_norm(const DirectSum3& a);
/// Lanczos on X*X with matrix-free mode products; single terms use the exact
/// product of factor norms.
NormResult op_norm(const KronSum& x, double tol = 1e-10, int max_iter = 500);
NormResult op_norm(const StructuredOperator& x, double tol = 1e-10, int max_iter = 500);

double hs_norm(const Matrix& a);
/// Frobenius norm from factor trace Gram matrices, no materialization.
double hs_norm(const KronSum& x);

using ApplyFn = std::function<void(std::span<const cplx>, std::span<cplx>)>;

/// Largest eigenvalue of a Hermitian positive semidefinite operator by Lanczos
/// with full reorthogonalization; the estimate is returned once the top Ritz
/// residual is below tol (relative). Start vector is seeded for reproducibility.
NormResult lanczos_largest(const ApplyFn& apply, Eigen::Index n, double tol, int max_iter,
                           std::uint64_t seed = 0x5eedULL);

}  // namespace nambu
