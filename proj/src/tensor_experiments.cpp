#include <array>
#include <cmath>

#include "nambu/experiments.hpp"
#include "nambu/norm.hpp"

namespace nambu {

namespace {

struct TensorContext {
  const TorusGeometry& geom;
  int k;
  int grid;

  MatrixPtr t(const FourierSymbol& f, int r) const { return share(toeplitz_of(f, geom, r, k, grid)); }

  /// T_{f;1} (x) T_{f;2} (x) T_{f;3}
  KronSum x(const FourierSymbol& f) const { return kron3(t(f, 1), t(f, 2), t(f, 3)); }

  FourierSymbol pb(const FourierSymbol& f, const FourierSymbol& g, int r) const {
    return poisson_bracket(f, g, geom.kahler_form(r));
  }
};

void need_t4(const TorusGeometry& geom) {
  if (geom.dim() != 4 || geom.num_structures() != 3) throw Error("statement needs the hyperkahler 4-torus");
}

std::size_t arity_of(TensorWhich which) {
  switch (which) {
    case TensorWhich::gencomm_norm:
    case TensorWhich::prop4:
    case TensorWhich::W:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

KronSum tensor_w_operator(std::span<const FourierSymbol> fs, const TorusGeometry& geom, int k,
                          const EvalOptions& opts) {
  need_t4(geom);
  if (fs.size() != 4) throw Error("W needs four symbols");
  const TensorContext c{geom, k, opts.grid_nodes};
  const FourierSymbol p = fs[0] * fs[1] * fs[2] * fs[3];
  const std::array<MatrixPtr, 3> tp{c.t(p, 1), c.t(p, 2), c.t(p, 3)};

  const Eigen::Index n = tp[0]->rows();
  KronSum w({n, n, n});
  for (int r = 1; r <= 3; ++r) {
    const MatrixPtr tb = c.t(bracket4_r(fs[0], fs[1], fs[2], fs[3], geom, r), r);
    std::array<MatrixPtr, 3> f = tp;
    f[r - 1] = tb;
    w.add(1.0, f[0], f[1], f[2]);
  }

  struct Pairing {
    int i, j, m, l;
    double sign;
  };
  for (const Pairing& q : {Pairing{0, 1, 2, 3, 1.0}, Pairing{0, 2, 1, 3, -1.0}, Pairing{0, 3, 1, 2, 1.0}}) {
    const FourierSymbol fij = fs[q.i] * fs[q.j], fml = fs[q.m] * fs[q.l];
    // a[r] = T_{f_i f_j {f_m,f_l}_r ; r}, b[r] = T_{f_m f_l {f_i,f_j}_r ; r}
    std::array<MatrixPtr, 3> a, b;
    for (int r = 1; r <= 3; ++r) {
      a[r - 1] = c.t(fij * c.pb(fs[q.m], fs[q.l], r), r);
      b[r - 1] = c.t(fml * c.pb(fs[q.i], fs[q.j], r), r);
    }
    w.add(q.sign, a[0], b[1], tp[2]);
    w.add(q.sign, a[0], tp[1], b[2]);
    w.add(q.sign, b[0], a[1], tp[2]);
    w.add(q.sign, b[0], tp[1], a[2]);
    w.add(q.sign, tp[0], a[1], b[2]);
    w.add(q.sign, tp[0], b[1], a[2]);
  }
  return w;
}

KronSum tensor_residual_operator(TensorWhich which, std::span<const FourierSymbol> fs, const TorusGeometry& geom,
                                 int k, const EvalOptions& opts) {
  need_t4(geom);
  if (fs.size() != arity_of(which)) throw Error("wrong number of symbols for the tensor statement");
  const TensorContext c{geom, k, opts.grid_nodes};
  const cplx ik(0.0, opts.ik_sign * k);

  switch (which) {
    case TensorWhich::product:
      return kron_product(c.x(fs[0]), c.x(fs[1])) - c.x(fs[0] * fs[1]);

    case TensorWhich::triple_comm: {
      std::array<MatrixPtr, 3> comm, target;
      for (int r = 1; r <= 3; ++r) {
        comm[r - 1] = share(commutator(*c.t(fs[0], r), *c.t(fs[1], r)));
        target[r - 1] = c.t(c.pb(fs[0], fs[1], r), r);
      }
      return kron3(comm[0], comm[1], comm[2], ik * ik * ik) - kron3(target[0], target[1], target[2]);
    }

    case TensorWhich::comm: {
      KronSum out = ik * kron_commutator(c.x(fs[0]), c.x(fs[1]));
      const FourierSymbol fg = fs[0] * fs[1];
      const std::array<MatrixPtr, 3> tfg{c.t(fg, 1), c.t(fg, 2), c.t(fg, 3)};
      for (int r = 1; r <= 3; ++r) {
        std::array<MatrixPtr, 3> f = tfg;
        f[r - 1] = c.t(c.pb(fs[0], fs[1], r), r);
        out.add(-1.0, f[0], f[1], f[2]);
      }
      return out;
    }

    case TensorWhich::comm_norm:
      return kron_commutator(c.x(fs[0]), c.x(fs[1]));

    case TensorWhich::gencomm_norm: {
      const std::vector<KronSum> xs{c.x(fs[0]), c.x(fs[1]), c.x(fs[2]), c.x(fs[3])};
      return kron_gen_commutator(xs);
    }

    case TensorWhich::prop4: {
      std::array<MatrixPtr, 3> g, target;
      for (int r = 1; r <= 3; ++r) {
        const std::vector<Matrix> ts{*c.t(fs[0], r), *c.t(fs[1], r), *c.t(fs[2], r), *c.t(fs[3], r)};
        g[r - 1] = share(gen_commutator(ts));
        target[r - 1] = c.t(bracket4_r(fs[0], fs[1], fs[2], fs[3], geom, r), r);
      }
      const double kk = static_cast<double>(k);
      return kron3(g[0], g[1], g[2], -std::pow(kk, 6) / 8.0) - kron3(target[0], target[1], target[2]);
    }

    case TensorWhich::W: {
      const std::vector<KronSum> xs{c.x(fs[0]), c.x(fs[1]), c.x(fs[2]), c.x(fs[3])};
      KronSum out = cplx(-0.5 * k * k) * kron_gen_commutator(xs);
      out -= tensor_w_operator(fs, geom, k, opts);
      return out;
    }
  }
  throw Error("unknown tensor statement");
}

Evaluation resid_tensor(TensorWhich which, std::span<const FourierSymbol> fs, const TorusGeometry& geom, int k,
                        const EvalOptions& opts) {
  const KronSum x = tensor_residual_operator(which, fs, geom, k, opts);
  Evaluation e;
  if (opts.dense_tensor) {
    const Matrix d = x.dense();
    e.residual = op_norm(d);
    e.hs = d.norm();
    return e;
  }
  const NormResult n = op_norm(x, opts.norm_tol, opts.max_iter);
  e.residual = n.value;
  e.converged = n.converged;
  e.iterations = n.iterations;
  e.hs = hs_norm(x);
  return e;
}

}  // namespace nambu
