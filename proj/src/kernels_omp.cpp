#include <vector>

#include <omp.h>

#include "nambu/kernels.hpp"

namespace nambu::kernels {

namespace {

// out = coeff * (A (x) B (x) C) in, with a scratch buffer of size N.
void apply_term(const KronTerm& term, const KronSum::Dims& d, const cplx* in, cplx* out, std::vector<cplx>& s1) {
  using CMap = Eigen::Map<const Matrix>;
  using Map = Eigen::Map<Matrix>;
  const auto [n1, n2, n3] = d;
  const Matrix& a = *term.factors[0];
  const Matrix& b = *term.factors[1];
  const Matrix& c = *term.factors[2];

  // Row-major (i1 i2, i3) tensor seen as a column-major n3 x (n1 n2) matrix.
  Map(out, n3, n1 * n2).noalias() = c * CMap(in, n3, n1 * n2);
  for (Eigen::Index i1 = 0; i1 < n1; ++i1) {
    const Eigen::Index off = i1 * n2 * n3;
    Map(s1.data() + off, n3, n2).noalias() = CMap(out + off, n3, n2) * b.transpose();
  }
  Map(out, n2 * n3, n1).noalias() = term.coeff * (CMap(s1.data(), n2 * n3, n1) * a.transpose());
}

}  // namespace

// Each term lands in its own buffer and the buffers are summed in term order,
// so the result does not depend on the thread count.
void kron_apply(const KronSum& x, const cplx* in, cplx* out) {
  const Eigen::Index n = x.size();
  const auto terms = x.terms();
  const int nt = static_cast<int>(terms.size());
  for (Eigen::Index i = 0; i < n; ++i) out[i] = 0.0;
  if (nt == 0) return;

  if (omp_get_max_threads() == 1 || nt == 1) {
    std::vector<cplx> s1(n), buf(n);
    for (int t = 0; t < nt; ++t) {
      apply_term(terms[t], x.dims(), in, buf.data(), s1);
      for (Eigen::Index i = 0; i < n; ++i) out[i] += buf[i];
    }
    return;
  }

  std::vector<std::vector<cplx>> bufs(nt);
#pragma omp parallel
  {
    std::vector<cplx> s1(n);
#pragma omp for schedule(dynamic)
    for (int t = 0; t < nt; ++t) {
      bufs[t].resize(n);
      apply_term(terms[t], x.dims(), in, bufs[t].data(), s1);
    }
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
      for (int t = 0; t < nt; ++t) out[i] += bufs[t][i];
  }
}

// Rows are independent; their contributions are added in row order.
Matrix plane_monomial(int k, int n_g, int mx, int my) {
  struct Hit {
    int a, b;
    cplx v;
  };
  std::vector<std::vector<Hit>> rows(n_g);
#pragma omp parallel
  {
    std::vector<double> g;
#pragma omp for schedule(static)
    for (int j = 0; j < n_g; ++j) {
      const double y = static_cast<double>(j) / n_g;
      const auto range = detail::theta_range(k, y);
      g.resize(range.hi - range.lo + 1);
      for (long nu = range.lo; nu <= range.hi; ++nu) g[nu - range.lo] = detail::theta_gauss(k, y, nu);
      const cplx phase = std::polar(1.0, kTwoPi * my * y);
      // The x sum of e((nu' - nu + mx) x) is n_g when nu - nu' = mx mod n_g, else 0.
      for (long nb = range.lo; nb <= range.hi; ++nb)
        for (long na = range.lo; na <= range.hi; ++na) {
          if (detail::wrap(na - nb - mx, n_g) != 0) continue;
          rows[j].push_back({static_cast<int>(detail::wrap(na, k)), static_cast<int>(detail::wrap(nb, k)),
                             g[na - range.lo] * g[nb - range.lo] * phase});
        }
    }
  }
  Matrix p = Matrix::Zero(k, k);
  for (const auto& row : rows)
    for (const auto& h : row) p(h.a, h.b) += h.v;
  return p / static_cast<double>(n_g);
}

}  // namespace nambu::kernels
