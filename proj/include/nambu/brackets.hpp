#pragma once

#include <span>

#include <Eigen/Dense>

#include "nambu/symbol.hpp"

namespace nambu {

/// Constant symplectic form omega = 1/2 A_ij dx_i ^ dx_j.
class ConstantSymplecticForm {
 public:
  explicit ConstantSymplecticForm(Eigen::MatrixXd a);

  /// A = scale * sum_j (e_{2j-1} e_{2j}^T - e_{2j} e_{2j-1}^T).
  static ConstantSymplecticForm darboux(int dim, double scale = 1.0);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::MatrixXd& inverse() const { return inv_; }

  /// P with {f,g} = P_il d_i f d_l g; P = -A^{-1} reproduces the Darboux
  /// formula {f,g} = sum_j (f_{2j-1} g_{2j} - f_{2j} g_{2j-1}).
  Eigen::MatrixXd poisson_tensor() const { return -inv_; }

  /// omega^n / n! = pfaffian() dx_1 ^ ... ^ dx_2n.
  double pfaffian() const;

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd inv_;
};

double pfaffian(const Eigen::MatrixXd& a);

/// Omega = rho dx_1 ^ ... ^ dx_d. rho may be negative when Omega is
/// oriented against dx_1 ^ ... ^ dx_d.
struct VolumeDensity {
  int dim = 0;
  double rho = 1.0;
};

/// Density of the Liouville form omega^n / n!.
VolumeDensity liouville_density(const ConstantSymplecticForm& form);

FourierSymbol poisson_bracket(const FourierSymbol& f, const FourierSymbol& g,
                              const ConstantSymplecticForm& form);

/// {f_1,...,f_d} defined by df_1 ^ ... ^ df_d = {f_1,...,f_d} Omega, i.e.
/// det(d f_i / d x_l) / rho.
FourierSymbol nambu_bracket_det(std::span<const FourierSymbol> fs, const VolumeDensity& density);

/// (1 / 2^n n!) sum_sigma sign(sigma) prod_j {f_sigma(2j-1), f_sigma(2j)}.
FourierSymbol nambu_bracket_pairwise(std::span<const FourierSymbol> fs, const ConstantSymplecticForm& form);

/// {f,g}{h,t} - {f,h}{g,t} + {f,t}{g,h} for one form.
FourierSymbol bracket4(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                       const FourierSymbol& t, const ConstantSymplecticForm& form);

}  // namespace nambu
