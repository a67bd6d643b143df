#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "nambu/symbol.hpp"

namespace nambu {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A matrix with a label and an optional quantization level (0 = none).
struct DenseOperator {
  Matrix matrix;
  std::string label;
  int level = 0;
};

enum class CommutatorMethod {
  direct,      // signed sum over all (2n)! monomials
  restricted,  // sum over sigma(2j-1) < sigma(2j) of products of commutators
  halved,      // 2^{-n} times the sum over all sigma of products of commutators
};

Matrix commutator(const Matrix& a, const Matrix& b);

/// Nambu generalized commutator [A_1, ..., A_2n] = sum_sigma sign(sigma) A_sigma(1) ... A_sigma(2n).
/// Supports 2 <= 2n <= 6.
Matrix gen_commutator(std::span<const Matrix> ops, CommutatorMethod method = CommutatorMethod::restricted);

/// The six-product expansion of the 4-bracket in pairwise commutators.
Matrix comm4_expand(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

/// Frobenius-relative difference |a - b|_F / max(|a|_F, |b|_F), 0 when both vanish.
double relative_difference(const Matrix& a, const Matrix& b);

}  // namespace nambu
