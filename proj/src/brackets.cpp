#include "nambu/brackets.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "nambu/permutations.hpp"

namespace nambu {

ConstantSymplecticForm::ConstantSymplecticForm(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() % 2 != 0 || a_.rows() == 0)
    throw Error("symplectic form needs a square matrix of even size");
  if ((a_ + a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a_.cwiseAbs().maxCoeff()))
    throw Error("symplectic form matrix is not antisymmetric");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a_);
  if (!lu.isInvertible()) throw Error("symplectic form matrix is degenerate");
  inv_ = lu.inverse();
}

ConstantSymplecticForm ConstantSymplecticForm::darboux(int dim, double scale) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j + 1 < dim; j += 2) {
    a(j, j + 1) = scale;
    a(j + 1, j) = -scale;
  }
  return ConstantSymplecticForm(std::move(a));
}

double pfaffian(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  // Expansion along the first row.
  double sum = 0.0;
  for (int j = 1; j < n; ++j) {
    if (a(0, j) == 0.0) continue;
    std::vector<int> keep;
    for (int i = 1; i < n; ++i)
      if (i != j) keep.push_back(i);
    Eigen::MatrixXd minor(n - 2, n - 2);
    for (int r = 0; r < n - 2; ++r)
      for (int c = 0; c < n - 2; ++c) minor(r, c) = a(keep[r], keep[c]);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    sum += sign * a(0, j) * pfaffian(minor);
  }
  return sum;
}

double ConstantSymplecticForm::pfaffian() const { return nambu::pfaffian(a_); }

VolumeDensity liouville_density(const ConstantSymplecticForm& form) { return {form.dim(), form.pfaffian()}; }

FourierSymbol poisson_bracket(const FourierSymbol& f, const FourierSymbol& g, const ConstantSymplecticForm& form) {
  if (f.dim() != g.dim() || f.dim() != form.dim()) throw Error("dimension mismatch in Poisson bracket");
  const int d = f.dim();
  const Eigen::MatrixXd p = form.poisson_tensor();
  std::vector<FourierSymbol> df, dg;
  for (int a = 0; a < d; ++a) {
    df.push_back(partial_derivative(f, a));
    dg.push_back(partial_derivative(g, a));
  }
  FourierSymbol out(d);
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l)
      if (std::abs(p(i, l)) > 0.0 && !df[i].is_zero() && !dg[l].is_zero()) out += p(i, l) * sym_mul(df[i], dg[l]);
  return out;
}

FourierSymbol nambu_bracket_det(std::span<const FourierSymbol> fs, const VolumeDensity& density) {
  const int d = density.dim;
  if (static_cast<int>(fs.size()) != d) throw Error("Nambu bracket arity must equal the dimension");
  for (const auto& f : fs)
    if (f.dim() != d) throw Error("dimension mismatch in Nambu bracket");

  // Sparse rows first so the large row meets the smallest minors; a row
  // permutation only changes the sign.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a].size() < fs[b].size(); });
  const double row_sign = permutation_sign(order);

  std::vector<std::vector<FourierSymbol>> jac(d);
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l) jac[i].push_back(partial_derivative(fs[order[i]], l));

  // Laplace expansion by column subsets: minor[S] is the determinant of the
  // first |S| rows restricted to the (sorted) columns in bitmask S.
  std::map<unsigned, FourierSymbol> minors;
  minors.emplace(0u, FourierSymbol::constant(d, 1.0));
  for (int row = 0; row < d; ++row) {
    std::map<unsigned, FourierSymbol> next;
    for (unsigned s = 0; s < (1u << d); ++s) {
      if (std::popcount(s) != row + 1) continue;
      std::vector<SymbolProduct> parts;
      int pos = 0;
      for (int c = 0; c < d; ++c) {
        if (!(s & (1u << c))) continue;
        const auto it = minors.find(s & ~(1u << c));
        if (it != minors.end() && !it->second.is_zero() && !jac[row][c].is_zero())
          parts.push_back({((row + pos) % 2 == 0) ? 1.0 : -1.0, &it->second, &jac[row][c]});
        ++pos;
      }
      FourierSymbol acc = parts.empty() ? FourierSymbol(d) : sym_mul_sum(parts);
      next.emplace(s, std::move(acc));
    }
    minors = std::move(next);
  }
  return (row_sign / density.rho) * minors.at((1u << d) - 1);
}

FourierSymbol nambu_bracket_pairwise(std::span<const FourierSymbol> fs, const ConstantSymplecticForm& form) {
  const int d = form.dim();
  if (static_cast<int>(fs.size()) != d) throw Error("Nambu bracket arity must equal the dimension");
  const int n = d / 2;

  std::vector<std::vector<FourierSymbol>> pb(d, std::vector<FourierSymbol>(d, FourierSymbol(d)));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      pb[a][b] = poisson_bracket(fs[a], fs[b], form);
      pb[b][a] = -pb[a][b];
    }

  // Every permutation contributes a signed product of pair brackets; products
  // that coincide after canonical ordering of the pairs are summed first.
  std::map<std::vector<std::pair<int, int>>, double> weight;
  for_each_permutation(d, [&](const std::vector<int>& p, int sign) {
    std::vector<std::pair<int, int>> pairs;
    double s = sign;
    for (int j = 0; j < n; ++j) {
      int a = p[2 * j], b = p[2 * j + 1];
      if (a > b) {
        std::swap(a, b);
        s = -s;
      }
      pairs.emplace_back(a, b);
    }
    std::sort(pairs.begin(), pairs.end());
    weight[pairs] += s;
  });

  double norm = 1.0;
  for (int j = 1; j <= n; ++j) norm *= 2.0 * j;  // 2^n n!

  FourierSymbol out(d);
  for (const auto& [pairs, w] : weight) {
    if (w == 0.0) continue;
    FourierSymbol term = pb[pairs[0].first][pairs[0].second];
    for (std::size_t j = 1; j < pairs.size(); ++j) term = sym_mul(term, pb[pairs[j].first][pairs[j].second]);
    out += (w / norm) * term;
  }
  return out;
}

FourierSymbol bracket4(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h, const FourierSymbol& t,
                       const ConstantSymplecticForm& form) {
  return sym_mul(poisson_bracket(f, g, form), poisson_bracket(h, t, form)) -
         sym_mul(poisson_bracket(f, h, form), poisson_bracket(g, t, form)) +
         sym_mul(poisson_bracket(f, t, form), poisson_bracket(g, h, form));
}

}  // namespace nambu
