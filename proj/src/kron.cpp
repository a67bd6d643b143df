#include "nambu/kron.hpp"

#include <cstring>
#include <functional>

#include "nambu/kernels.hpp"
#include "nambu/permutations.hpp"

namespace nambu {

namespace {

std::size_t content_hash(const Matrix& m) {
  // FNV-1a over the raw coefficients.
  std::size_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const std::size_t len = static_cast<std::size_t>(m.size()) * sizeof(cplx);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h ^ static_cast<std::size_t>(m.rows());
}

bool same_factor(const MatrixPtr& a, const MatrixPtr& b) {
  if (a == b) return true;
  return a->rows() == b->rows() && a->cols() == b->cols() &&
         std::memcmp(a->data(), b->data(), static_cast<std::size_t>(a->size()) * sizeof(cplx)) == 0;
}

void check_dims(const KronSum& x, const KronSum& y) {
  if (x.dims() != y.dims()) throw Error("Kronecker factor size mismatch");
}

const KronTerm& single(const KronSum& x) {
  if (x.num_terms() != 1) throw Error("operation needs a single-term Kronecker product");
  return x.terms()[0];
}

}  // namespace

KronSum::KronSum(Dims dims) : dims_(dims) {
  for (auto n : dims_)
    if (n < 1) throw Error("Kronecker factor sizes must be positive");
}

void KronSum::add(cplx coeff, MatrixPtr a, MatrixPtr b, MatrixPtr c) {
  const std::array<MatrixPtr, 3> f{std::move(a), std::move(b), std::move(c)};
  for (int i = 0; i < 3; ++i) {
    if (!f[i]) throw Error("null Kronecker factor");
    if (f[i]->rows() != dims_[i] || f[i]->cols() != dims_[i]) throw Error("Kronecker factor size mismatch");
  }
  if (coeff == cplx(0.0)) return;
  terms_.push_back({coeff, f});
}

KronSum& KronSum::operator+=(const KronSum& other) {
  check_dims(*this, other);
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

KronSum& KronSum::operator-=(const KronSum& other) {
  check_dims(*this, other);
  for (const auto& t : other.terms_) terms_.push_back({-t.coeff, t.factors});
  return *this;
}

KronSum& KronSum::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

KronSum operator+(KronSum a, const KronSum& b) { return a += b; }
KronSum operator-(KronSum a, const KronSum& b) { return a -= b; }
KronSum operator*(cplx s, KronSum a) { return a *= s; }

KronSum KronSum::adjoint() const {
  KronSum out(dims_);
  for (const auto& t : terms_)
    out.add(std::conj(t.coeff), share(t.factors[0]->adjoint()), share(t.factors[1]->adjoint()),
            share(t.factors[2]->adjoint()));
  return out;
}

KronSum KronSum::merged() const {
  KronSum out(dims_);
  std::vector<std::array<std::size_t, 3>> hashes;
  for (const auto& t : terms_) {
    const std::array<std::size_t, 3> h{content_hash(*t.factors[0]), content_hash(*t.factors[1]),
                                       content_hash(*t.factors[2])};
    bool found = false;
    for (std::size_t i = 0; i < out.terms_.size() && !found; ++i) {
      if (hashes[i] != h) continue;
      auto& o = out.terms_[i];
      if (same_factor(o.factors[0], t.factors[0]) && same_factor(o.factors[1], t.factors[1]) &&
          same_factor(o.factors[2], t.factors[2])) {
        o.coeff += t.coeff;
        found = true;
      }
    }
    if (!found) {
      out.terms_.push_back(t);
      hashes.push_back(h);
    }
  }
  std::erase_if(out.terms_, [](const KronTerm& t) { return t.coeff == cplx(0.0); });
  return out;
}

Matrix KronSum::dense() const {
  const Eigen::Index n = size();
  if (n > 4096) throw Error("refusing to materialize a Kronecker sum larger than 4096");
  const auto [n1, n2, n3] = dims_;
  Matrix out = Matrix::Zero(n, n);
  for (const auto& t : terms_) {
    const Matrix& a = *t.factors[0];
    const Matrix& b = *t.factors[1];
    const Matrix& c = *t.factors[2];
    for (Eigen::Index i1 = 0; i1 < n1; ++i1)
      for (Eigen::Index j1 = 0; j1 < n1; ++j1) {
        const cplx ca = t.coeff * a(i1, j1);
        if (ca == cplx(0.0)) continue;
        for (Eigen::Index i2 = 0; i2 < n2; ++i2)
          for (Eigen::Index j2 = 0; j2 < n2; ++j2) {
            const cplx cb = ca * b(i2, j2);
            if (cb == cplx(0.0)) continue;
            out.block((i1 * n2 + i2) * n3, (j1 * n2 + j2) * n3, n3, n3) += cb * c;
          }
      }
  }
  return out;
}

void KronSum::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (static_cast<Eigen::Index>(x.size()) != size() || static_cast<Eigen::Index>(y.size()) != size())
    throw Error("vector length does not match the Kronecker sum");
  kernels::kron_apply(*this, x.data(), y.data());
}

void KronSum::apply(const Vector& x, Vector& y) const {
  y.resize(size());
  apply(std::span<const cplx>(x.data(), x.size()), std::span<cplx>(y.data(), y.size()));
}

KronSum kron3(const Matrix& a, const Matrix& b, const Matrix& c) { return kron3(share(a), share(b), share(c)); }

KronSum kron3(MatrixPtr a, MatrixPtr b, MatrixPtr c, cplx coeff) {
  if (!a || !b || !c) throw Error("null Kronecker factor");
  KronSum out({a->rows(), b->rows(), c->rows()});
  out.add(coeff, std::move(a), std::move(b), std::move(c));
  return out;
}

KronSum kron_product(const KronSum& x, const KronSum& y) {
  check_dims(x, y);
  KronSum out(x.dims());
  for (const auto& s : x.terms())
    for (const auto& t : y.terms())
      out.add(s.coeff * t.coeff, share(*s.factors[0] * *t.factors[0]), share(*s.factors[1] * *t.factors[1]),
              share(*s.factors[2] * *t.factors[2]));
  return out;
}

KronSum kron_commutator(const KronSum& x, const KronSum& y) {
  check_dims(x, y);
  const KronTerm& s = single(x);
  const KronTerm& t = single(y);
  std::array<Matrix, 3> ab, ba, comm;
  for (int i = 0; i < 3; ++i) {
    ab[i] = *s.factors[i] * *t.factors[i];
    ba[i] = *t.factors[i] * *s.factors[i];
    comm[i] = ab[i] - ba[i];
  }
  const cplx c = s.coeff * t.coeff;
  KronSum out(x.dims());
  out.add(c, share(comm[0]), share(comm[1]), share(comm[2]));
  out.add(c, share(comm[0]), share(ba[1]), share(ab[2]));
  out.add(c, share(ab[0]), share(comm[1]), share(ba[2]));
  out.add(c, share(ba[0]), share(ab[1]), share(comm[2]));
  return out;
}

KronSum kron_gen_commutator(std::span<const KronSum> xs) {
  const int m = static_cast<int>(xs.size());
  if (m < 2 || m > 6 || m % 2 != 0) throw Error("generalized commutator needs even arity between 2 and 6");
  for (const auto& x : xs) check_dims(x, xs[0]);
  KronSum out(xs[0].dims());
  std::vector<KronSum> prefix(m, KronSum(xs[0].dims()));
  std::vector<int> last(m, -1);
  for_each_permutation(m, [&](const std::vector<int>& p, int sign) {
    int same = 0;
    while (same < m && last[same] == p[same]) ++same;
    for (int i = same; i < m; ++i) {
      prefix[i] = (i == 0) ? xs[p[0]] : kron_product(prefix[i - 1], xs[p[i]]);
      last[i] = p[i];
    }
    if (sign > 0)
      out += prefix[m - 1];
    else
      out -= prefix[m - 1];
  });
  return out;
}

Matrix DirectSum3::dense() const {
  const Eigen::Index n = size();
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

DirectSum3 direct_sum3(Matrix a, Matrix b, Matrix c) {
  for (const Matrix* m : {&a, &b, &c})
    if (m->rows() != m->cols() || m->rows() < 1) throw Error("direct-sum blocks must be square and nonempty");
  return DirectSum3{{std::move(a), std::move(b), std::move(c)}};
}

}  // namespace nambu
