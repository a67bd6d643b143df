#pragma once

#include <array>

#include "nambu/theta.hpp"

namespace nambu {

/// (T_f)_{ab} = <e_a, f e_b> in the orthonormal frame e = s C.
/// Throws if the grid is coarser than grid_rule(k, max_freq(f)).
DenseOperator toeplitz_matrix(const FourierSymbol& f, const ThetaBasis& basis, const QuadratureGrid& grid);
DenseOperator toeplitz_matrix(const FourierSymbol& f, const ThetaBasis& basis);

/// T_f^(k) for one structure of a preset geometry, using the shared basis cache.
DenseOperator quantize(const FourierSymbol& f, const TorusGeometry& geom, int r, int k);

/// (T_{f;1}, T_{f;2}, T_{f;3}) on the 4-torus.
std::array<DenseOperator, 3> quantize_triple(const FourierSymbol& f, const TorusGeometry& geom, int k);

}  // namespace nambu
