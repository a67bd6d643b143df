#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "nambu/geometry.hpp"
#include "nambu/operator.hpp"

namespace nambu {

/// Uniform nodes j / n on [0,1)^d with weight n^{-d}.
struct QuadratureGrid {
  int nodes = 32;

  double weight(int dim) const;
};

/// N_g = max(8k + 4 max_freq, 32).
int grid_rule(int k, int max_freq);
QuadratureGrid grid_for(int k, int max_freq);

/// Monomial matrices of the weighted level-k theta basis on one holomorphic
/// plane, computed lazily on an n_g x n_g grid and kept for reuse.
/// If NAMBU_CACHE_DIR is set, entries are also persisted there.
class PlaneTable {
 public:
  PlaneTable(int k, int nodes);

  int level() const { return k_; }
  int nodes() const { return nodes_; }
  /// P[a][b] = integral of conj(psi_a) e(mx x + my y) psi_b.
  const Matrix& get(int mx, int my) const;

 private:
  int k_;
  int nodes_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const Matrix>> cache_;
};

std::shared_ptr<const PlaneTable> plane_table(int k, int nodes);

struct BasisOptions {
  /// Section a of the basis is scale[a] times canonical section permutation[a].
  std::vector<int> permutation;
  std::vector<double> scale;
};

/// Level-k holomorphic sections of L_r^k on the torus: products over the
/// holomorphic planes of theta functions with characteristics j/k at tau = i,
///   theta_j(x + i y) = sum_{nu = j mod k} exp(-pi nu^2 / k - 2 pi nu y) e(nu x),
/// hermitian weight exp(-phi_k), phi_k = 2 pi k sum_planes y^2.
/// Canonical sections carry the factor (2k)^{1/4} per plane so that G = I.
class ThetaBasis {
 public:
  ThetaBasis(const TorusGeometry& geom, int r, int k, BasisOptions options = {});

  int level() const { return k_; }
  int structure() const { return r_; }
  int dim() const { return n_; }
  int space_dim() const { return d_; }
  const std::vector<HolomorphicPlane>& planes() const { return planes_; }
  const Eigen::MatrixXi& complex_structure() const { return j_; }
  const Eigen::MatrixXd& form_matrix() const { return omega_; }

  /// Unweighted section value s_a(x) at a point of R^d.
  cplx evaluate(int a, std::span<const double> x) const;
  /// Hermitian weight exponent phi_k(x); exp(-phi_k)|s|^2 is lattice periodic.
  double potential(std::span<const double> x) const;
  /// Factor with s(x + lambda) = multiplier(lambda, x) s(x), common to all sections.
  cplx multiplier(std::span<const int> lambda, std::span<const double> x) const;
  /// Real 2-form of i ddbar phi_k from a central-difference Hessian, to compare with k omega_r.
  Eigen::MatrixXd curvature(std::span<const double> x, double h = 1e-3) const;

  const Matrix& gram() const { return gram_; }
  /// Upper-triangular C = L^{-*} with G = L L^*, so C^* G C = I.
  const Matrix& orthonormalizer() const { return c_; }
  int gram_rank(double rel_tol = 1e-10) const;
  double gram_condition() const;

  /// Unorthonormalized <s_a, e_m s_b> from per-plane monomial tables.
  Matrix raw_monomial(const Freq& m, const PlaneTable& table) const;
  /// Unorthonormalized <s_a, f s_b> for a whole symbol.
  Matrix raw_symbol(const FourierSymbol& f, const PlaneTable& table) const;
  /// Applies the basis permutation and scaling to a matrix given in canonical indices.
  Matrix to_basis(const Matrix& canonical) const;

 private:
  int plane_index(int a, int plane) const;

  int k_, r_, d_, n_;
  std::vector<HolomorphicPlane> planes_;
  Eigen::MatrixXi j_;
  Eigen::MatrixXd omega_;
  std::vector<int> perm_;
  std::vector<double> scale_;
  Matrix gram_, c_;
};

std::shared_ptr<const ThetaBasis> build_theta_basis(const TorusGeometry& geom, int r, int k);

/// Shared read-mostly cache keyed by (geometry name, r, k).
std::shared_ptr<const ThetaBasis> cached_basis(const TorusGeometry& geom, int r, int k);

/// Unweighted plane theta function at z = x + i y.
cplx plane_theta(int k, int j, double x, double y);

}  // namespace nambu
