#include "nambu/geometry.hpp"

#include <algorithm>

namespace nambu {

namespace {

Eigen::MatrixXi make(int n, std::initializer_list<int> rows) {
  Eigen::MatrixXi m(n, n);
  auto it = rows.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace

std::vector<HolomorphicPlane> holomorphic_planes(const Eigen::MatrixXi& j) {
  const int d = static_cast<int>(j.rows());
  std::vector<HolomorphicPlane> planes;
  std::vector<bool> used(d, false);
  for (int p = 0; p < d; ++p) {
    if (used[p]) continue;
    // Column p is J e_p; it must be +-e_q for a signed-permutation structure.
    int q = -1, nonzero = 0;
    for (int i = 0; i < d; ++i)
      if (j(i, p) != 0) {
        ++nonzero;
        q = i;
      }
    if (nonzero != 1 || std::abs(j(q, p)) != 1 || q == p)
      throw Error("complex structure is not a signed permutation; holomorphic planes unsupported");
    used[p] = used[q] = true;
    if (j(q, p) == 1)
      planes.push_back({p, q});
    else
      planes.push_back({q, p});  // J e_q = e_p
  }
  return planes;
}

TorusGeometry::TorusGeometry(std::string name, int dim, std::vector<Eigen::MatrixXi> js)
    : name_(std::move(name)), dim_(dim), j_(std::move(js)) {
  for (const auto& j : j_) {
    // omega(u, v) = g(J u, v) => A_il = (J e_i) . e_l = J_li.
    omega_.emplace_back(kTwoPi * j.transpose().cast<double>());
    planes_.push_back(holomorphic_planes(j));
  }
}

TorusGeometry TorusGeometry::t2() { return TorusGeometry("t2", 2, {make(2, {0, -1, 1, 0})}); }

TorusGeometry TorusGeometry::t4() {
  Eigen::MatrixXi j1 = make(4, {0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0});
  Eigen::MatrixXi j2 = make(4, {0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0});
  Eigen::MatrixXi j3 = make(4, {0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0});
  return TorusGeometry("t4", 4, {j1, j2, j3});
}

void TorusGeometry::check_r(int r) const {
  if (r < 1 || r > num_structures()) throw Error("complex structure index out of range");
}

const Eigen::MatrixXi& TorusGeometry::complex_structure(int r) const {
  check_r(r);
  return j_[r - 1];
}

const ConstantSymplecticForm& TorusGeometry::kahler_form(int r) const {
  check_r(r);
  return omega_[r - 1];
}

const std::vector<HolomorphicPlane>& TorusGeometry::planes(int r) const {
  check_r(r);
  return planes_[r - 1];
}

VolumeDensity TorusGeometry::liouville(int r) const { return liouville_density(kahler_form(r)); }

VolumeDensity TorusGeometry::hyper_volume() const {
  if (dim_ != 4 || num_structures() != 3) throw Error("hyperkahler volume needs the 4-torus");
  double rho = 0.0;
  for (const auto& w : omega_) rho += 2.0 * w.pfaffian();  // omega ^ omega = 2 Pf(A) dx1234
  return {4, rho};
}

double TorusGeometry::mu(int r) const { return hyper_volume().rho / liouville(r).rho; }

GeometryChoice geometry_preset(const std::string& name) {
  if (name == "t2") return {TorusGeometry::t2(), 1};
  if (name == "t4") return {TorusGeometry::t4(), 0};
  if (name == "t4-r1") return {TorusGeometry::t4(), 1};
  if (name == "t4-r2") return {TorusGeometry::t4(), 2};
  if (name == "t4-r3") return {TorusGeometry::t4(), 3};
  throw Error("unknown geometry preset '" + name + "'");
}

FourierSymbol bracket4_r(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                         const FourierSymbol& t, const TorusGeometry& geom, int r) {
  return bracket4(f, g, h, t, geom.kahler_form(r));
}

FourierSymbol bracket4_hyp(const FourierSymbol& f, const FourierSymbol& g, const FourierSymbol& h,
                           const FourierSymbol& t, const TorusGeometry& geom) {
  FourierSymbol out(geom.dim());
  for (int r = 1; r <= geom.num_structures(); ++r) out += bracket4_r(f, g, h, t, geom, r);
  return out;
}

}  // namespace nambu
