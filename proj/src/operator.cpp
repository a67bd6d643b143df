#include "nambu/operator.hpp"

#include <algorithm>
#include <vector>

#include "nambu/permutations.hpp"

namespace nambu {

namespace {

void check_square_same(std::span<const Matrix> ops) {
  for (const auto& a : ops) {
    if (a.rows() != a.cols()) throw Error("operator is not square");
    if (a.rows() != ops[0].rows()) throw Error("operator size mismatch");
  }
}

}  // namespace

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("operator size mismatch");
  return a * b - b * a;
}

Matrix gen_commutator(std::span<const Matrix> ops, CommutatorMethod method) {
  const int m = static_cast<int>(ops.size());
  if (m < 2 || m > 6 || m % 2 != 0) throw Error("generalized commutator needs even arity between 2 and 6");
  check_square_same(ops);
  const Eigen::Index n = ops[0].rows();
  Matrix out = Matrix::Zero(n, n);

  if (method == CommutatorMethod::direct) {
    // Prefix products are shared between consecutive permutations.
    std::vector<Matrix> prefix(m);
    std::vector<int> last(m, -1);
    for_each_permutation(m, [&](const std::vector<int>& p, int sign) {
      int same = 0;
      while (same < m && last[same] == p[same]) ++same;
      for (int i = same; i < m; ++i) {
        prefix[i] = (i == 0) ? ops[p[0]] : Matrix(prefix[i - 1] * ops[p[i]]);
        last[i] = p[i];
      }
      if (sign > 0)
        out += prefix[m - 1];
      else
        out -= prefix[m - 1];
    });
    return out;
  }

  std::vector<std::vector<Matrix>> c(m, std::vector<Matrix>(m));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      c[a][b] = commutator(ops[a], ops[b]);
      c[b][a] = -c[a][b];
    }

  const bool restricted = method == CommutatorMethod::restricted;
  for_each_permutation(m, [&](const std::vector<int>& p, int sign) {
    if (restricted)
      for (int j = 0; j < m; j += 2)
        if (p[j] > p[j + 1]) return;
    Matrix prod = c[p[0]][p[1]];
    for (int j = 2; j < m; j += 2) prod = prod * c[p[j]][p[j + 1]];
    if (sign > 0)
      out += prod;
    else
      out -= prod;
  });
  if (!restricted) out /= static_cast<double>(1 << (m / 2));
  return out;
}

Matrix comm4_expand(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  const Matrix ab = commutator(a, b), ac = commutator(a, c), ad = commutator(a, d);
  const Matrix bc = commutator(b, c), bd = commutator(b, d), cd = commutator(c, d);
  return ab * cd - ac * bd + ad * bc + cd * ab - bd * ac + bc * ad;
}

double relative_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("operator size mismatch");
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

}  // namespace nambu
