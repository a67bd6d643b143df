#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nambu/brackets.hpp"

namespace nambu {

/// Complex coordinate z = x_p + i x_q (0-based axes) with J e_p = e_q.
struct HolomorphicPlane {
  int p = 0;
  int q = 1;
};

/// Flat torus R^d / Z^d with linear complex structures J_r (acting on column
/// vectors), the metric g = I and Kahler forms omega_r(u, v) = 2 pi g(J_r u, v).
class TorusGeometry {
 public:
  /// R^2 / Z^2, z = x_1 + i x_2, omega = 2 pi dx_1 ^ dx_2.
  static TorusGeometry t2();
  /// R^4 / Z^4 with the quaternionic triple J_1, J_2, J_3 = J_1 J_2.
  static TorusGeometry t4();

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int num_structures() const { return static_cast<int>(j_.size()); }

  /// Structure indices are 1-based to match omega_1, omega_2, omega_3.
  const Eigen::MatrixXi& complex_structure(int r) const;
  const ConstantSymplecticForm& kahler_form(int r) const;
  const std::vector<HolomorphicPlane>& planes(int r) const;
  Eigen::MatrixXd metric() const { return Eigen::MatrixXd::Identity(dim_, dim_); }

  /// Density of omega_r^n / n!.
  VolumeDensity liouville(int r) const;
  /// Density of Omega = sum_r omega_r ^ omega_r (d = 4 only).
  VolumeDensity hyper_volume() const;
  /// mu_r = Omega / (omega_r ^ omega_r / 2).
  double mu(int r) const;
  /// Quaternionic dimension q = d / 4 (0 for the 2-torus).
  int quaternionic_dim() const { return dim_ / 4; }

 private:
  TorusGeometry(std::string name, int dim, std::vector<Eigen::MatrixXi> js);
  void check_r(int r) const;

  std::string name_;
  int dim_;
  std::vector<Eigen::MatrixXi> j_;
  std::vector<ConstantSymplecticForm> omega_;
  std::vector<std::vector<HolomorphicPlane>> planes_;
};

/// Invariant coordinate planes of a signed-permutation complex structure,
/// ordered by their smallest axis.
std::vector<HolomorphicPlane> holomorphic_planes(const Eigen::MatrixXi& j);

/// Preset lookup: "t2" (r = 1), "t4-r1", "t4-r2", "t4-r3", and "t4" (r = 0, all structures).
struct GeometryChoice {
  TorusGeometry geometry;
  int r = 0;
};
GeometryChoice geometry_preset(const std::string& name);

FourierSymbol bracket4_r(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                         const FourierSymbol& t, const TorusGeometry& geom, int r);
FourierSymbol bracket4_hyp(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                           const FourierSymbol& t, const TorusGeometry& geom);

}  // namespace nambu
