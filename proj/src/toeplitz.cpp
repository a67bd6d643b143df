#include "nambu/toeplitz.hpp"

#include <string>

namespace nambu {

DenseOperator toeplitz_matrix(const FourierSymbol& f, const ThetaBasis& basis, const QuadratureGrid& grid) {
  if (f.dim() != basis.space_dim()) throw Error("symbol dimension does not match the geometry");
  const int k = basis.level();
  if (grid.nodes < grid_rule(k, f.max_freq()))
    throw Error("quadrature grid too coarse: need at least " + std::to_string(grid_rule(k, f.max_freq())) +
                " nodes per axis");
  const auto table = plane_table(k, grid.nodes);
  const Matrix raw = basis.raw_symbol(f, *table);
  const Matrix& c = basis.orthonormalizer();
  return {c.adjoint() * raw * c, "T", k};
}

DenseOperator toeplitz_matrix(const FourierSymbol& f, const ThetaBasis& basis) {
  return toeplitz_matrix(f, basis, grid_for(basis.level(), f.max_freq()));
}

DenseOperator quantize(const FourierSymbol& f, const TorusGeometry& geom, int r, int k) {
  auto op = toeplitz_matrix(f, *cached_basis(geom, r, k));
  op.label = "T_" + std::to_string(r);
  return op;
}

std::array<DenseOperator, 3> quantize_triple(const FourierSymbol& f, const TorusGeometry& geom, int k) {
  if (geom.dim() != 4 || geom.num_structures() != 3) throw Error("quantize_triple needs the 4-torus");
  return {quantize(f, geom, 1, k), quantize(f, geom, 2, k), quantize(f, geom, 3, k)};
}

}  // namespace nambu
