#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nambu {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr int kMaxDim = 4;

/// Integer frequency vector. Entries past the owning symbol's dimension are zero.
using Freq = std::array<int, kMaxDim>;

/// Thrown for malformed arguments (dimension mismatch, bad axis, bad arity, ...).
class Error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Trigonometric polynomial f(x) = sum_m c_m exp(2 pi i m.x) on the d-torus R^d / Z^d.
///
/// Terms are kept sorted by frequency with |c_m| above kPruneThreshold, so two
/// symbols are equal iff their coefficient lists are equal.
class FourierSymbol {
 public:
  struct Term {
    Freq m;
    cplx c;
  };

  static constexpr double kPruneThreshold = 1e-15;

  explicit FourierSymbol(int dim = 2);
  FourierSymbol(int dim, std::vector<Term> terms);

  static FourierSymbol constant(int dim, cplx c);
  static FourierSymbol monomial(int dim, const Freq& m, cplx c = 1.0);

  int dim() const { return dim_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// max over stored m of the sup-norm |m|_inf (0 for constants and for zero).
  int max_freq() const;
  cplx coeff(const Freq& m) const;
  double max_abs_coeff() const;
  bool is_real(double tol = 1e-12) const;

  cplx operator()(std::span<const double> x) const;

  FourierSymbol conj() const;
  FourierSymbol operator-() const;
  FourierSymbol& operator+=(const FourierSymbol& other);
  FourierSymbol& operator-=(const FourierSymbol& other);
  FourierSymbol& operator*=(cplx s);

  friend bool operator==(const FourierSymbol& a, const FourierSymbol& b);

 private:
  void canonicalize();

  int dim_;
  std::vector<Term> terms_;
};

FourierSymbol operator+(FourierSymbol a, const FourierSymbol& b);
FourierSymbol operator-(FourierSymbol a, const FourierSymbol& b);
FourierSymbol operator*(cplx s, FourierSymbol a);
FourierSymbol operator*(FourierSymbol a, cplx s);

/// Exact product of trigonometric polynomials (coefficient convolution).
FourierSymbol sym_mul(const FourierSymbol& f, const FourierSymbol& g);
FourierSymbol operator*(const FourierSymbol& f, const FourierSymbol& g);
FourierSymbol product(std::span<const FourierSymbol> fs);

struct SymbolProduct {
  cplx w;
  const FourierSymbol* f;
  const FourierSymbol* g;
};
/// sum_j w_j f_j g_j with one shared accumulator.
FourierSymbol sym_mul_sum(std::span<const SymbolProduct> terms);

/// c_m -> 2 pi i m_axis c_m. Axis is 0-based.
FourierSymbol partial_derivative(const FourierSymbol& f, int axis);

/// max_m |a_m - b_m| over the union of supports.
double coeff_distance(const FourierSymbol& a, const FourierSymbol& b);

/// Samples f on the uniform grid {j/n}^d, row-major with axis 0 slowest.
std::vector<cplx> evaluate_on_grid(const FourierSymbol& f, int n);

struct SupNormEstimate {
  double value = 0.0;
  int grid_n = 0;
  int refinements = 0;
};

/// Lower estimate of sup |f|: grid maximum followed by local ascent, refined by
/// grid doubling until the estimate moves by less than 1e-6.
SupNormEstimate sup_norm_estimate(const FourierSymbol& f, int grid_n = 0);
double sup_norm(const FourierSymbol& f, int grid_n = 0);

/// Deterministic sparse random symbol: a handful of frequencies with
/// |m|_inf <= max_freq, coefficients inside the unit disc, damped for
/// higher frequencies (factor 2^-(|m|^2-1)). real_valued enforces c_{-m} = conj(c_m).
FourierSymbol random_symbol(std::uint64_t seed, int dim, int max_freq, bool real_valued);

/// Named presets: "one", "cosI", "sinI", "expI" (I = 1-based axis),
/// "cosIcosJ", "sinIsinJ".
FourierSymbol preset_symbol(const std::string& name, int dim);

}  // namespace nambu
