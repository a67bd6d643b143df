#pragma once

#include <array>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "nambu/operator.hpp"

namespace nambu {

using MatrixPtr = std::shared_ptr<const Matrix>;

inline MatrixPtr share(Matrix m) { return std::make_shared<const Matrix>(std::move(m)); }

struct KronTerm {
  cplx coeff;
  std::array<MatrixPtr, 3> factors;
};

/// sum_t c_t A_t (x) B_t (x) C_t with square factors of fixed sizes (N1, N2, N3).
/// Vectors are indexed (i1 * N2 + i2) * N3 + i3, matching the Kronecker product.
/// Factors are shared and never mutated.
class KronSum {
 public:
  using Dims = std::array<Eigen::Index, 3>;

  explicit KronSum(Dims dims);

  const Dims& dims() const { return dims_; }
  Eigen::Index size() const { return dims_[0] * dims_[1] * dims_[2]; }
  std::span<const KronTerm> terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }

  void add(cplx coeff, MatrixPtr a, MatrixPtr b, MatrixPtr c);
  void add(const KronTerm& term) { add(term.coeff, term.factors[0], term.factors[1], term.factors[2]); }

  KronSum& operator+=(const KronSum& other);
  KronSum& operator-=(const KronSum& other);
  KronSum& operator*=(cplx s);

  KronSum adjoint() const;
  /// Merges terms whose three factors are identical (pointer or content equal).
  KronSum merged() const;
  /// Materialized N1 N2 N3 square matrix; intended for oracle checks.
  Matrix dense() const;

  /// y = X x (OpenMP kernel).
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  void apply(const Vector& x, Vector& y) const;

 private:
  Dims dims_;
  std::vector<KronTerm> terms_;
};

KronSum operator+(KronSum a, const KronSum& b);
KronSum operator-(KronSum a, const KronSum& b);
KronSum operator*(cplx s, KronSum a);

KronSum kron3(const Matrix& a, const Matrix& b, const Matrix& c);
KronSum kron3(MatrixPtr a, MatrixPtr b, MatrixPtr c, cplx coeff = 1.0);

/// (sum_s X_s)(sum_t Y_t) distributed termwise; term count multiplies.
KronSum kron_product(const KronSum& x, const KronSum& y);

/// [A1 (x) A2 (x) A3, B1 (x) B2 (x) B3] as the four-term expansion
/// [A1,B1](x)[A2,B2](x)[A3,B3] + [A1,B1](x)B2A2(x)A3B3 + A1B1(x)[A2,B2](x)B3A3 + B1A1(x)A2B2(x)[A3,B3].
KronSum kron_commutator(const KronSum& x, const KronSum& y);

/// Generalized commutator of structured operators via the direct signed
/// permutation sum of kron_product chains.
KronSum kron_gen_commutator(std::span<const KronSum> xs);

/// Block-diagonal A (+) B (+) C; blocks may differ in size.
struct DirectSum3 {
  std::array<Matrix, 3> blocks;

  Eigen::Index size() const { return blocks[0].rows() + blocks[1].rows() + blocks[2].rows(); }
  Matrix dense() const;
};

DirectSum3 direct_sum3(Matrix a, Matrix b, Matrix c);

using StructuredOperator = std::variant<DirectSum3, KronSum>;

}  // namespace nambu
