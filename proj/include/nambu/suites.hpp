#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nambu {

/// Worst observed error of one family of checks against its tolerance.
struct Check {
  std::string name;
  double worst = 0.0;
  double tol = 0.0;
  int count = 0;

  bool pass() const { return count > 0 && worst <= tol; }
  void record(double err);
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
  Check& check(const std::string& name, double tol);
  std::string summary() const;
};

/// Exact operator identities on seeded random matrix tuples (sizes 2..6):
/// the three generalized-commutator methods, the 4-bracket expansion and the
/// tensor commutator identity. inject_fault flips the sign of one term of the
/// 4-bracket expansion (negative control).
SuiteReport identity_suite(std::uint64_t seed, int trials, bool inject_fault = false);

/// Classical bracket identities on seeded tuples of max frequency 2, errors
/// coefficientwise relative to the coefficient scale.
SuiteReport bracket_suite(std::uint64_t seed, int trials, bool inject_fault = false);

/// T_1 = I, hermiticity, the sup-norm bound and grid-doubling stability on
/// the 2-torus for ks2 and every structure of the 4-torus for ks4.
SuiteReport quantization_suite(std::uint64_t seed, const std::vector<int>& ks2, const std::vector<int>& ks4);

}  // namespace nambu
