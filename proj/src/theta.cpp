#include "nambu/theta.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "nambu/kernels.hpp"

namespace nambu {

double QuadratureGrid::weight(int dim) const { return std::pow(1.0 / nodes, dim); }

int grid_rule(int k, int max_freq) { return std::max(8 * k + 4 * max_freq, 32); }

QuadratureGrid grid_for(int k, int max_freq) { return {grid_rule(k, max_freq)}; }

namespace {

std::string cache_file(int k, int nodes, int mx, int my) {
  const char* dir = std::getenv("NAMBU_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  return std::string(dir) + "/plane_k" + std::to_string(k) + "_n" + std::to_string(nodes) + "_" +
         std::to_string(mx) + "_" + std::to_string(my) + ".bin";
}

bool load_cached(const std::string& path, int k, Matrix& out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  Matrix m(k, k);
  is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * k * k));
  if (!is || is.peek() != std::char_traits<char>::eof()) return false;
  out = std::move(m);
  return true;
}

void store_cached(const std::string& path, const Matrix& m) {
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  const std::string tmp = path + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&m));
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) return;
    os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * m.size()));
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

PlaneTable::PlaneTable(int k, int nodes) : k_(k), nodes_(nodes) {
  if (k < 1) throw Error("level k must be positive");
  if (nodes < 1) throw Error("grid needs at least one node");
}

const Matrix& PlaneTable::get(int mx, int my) const {
  const auto key = std::make_pair(mx, my);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
  }
  const std::string path = cache_file(k_, nodes_, mx, my);
  Matrix m;
  if (path.empty() || !load_cached(path, k_, m)) {
    m = kernels::plane_monomial(k_, nodes_, mx, my);
    if (!path.empty()) store_cached(path, m);
  }
  std::lock_guard lock(mu_);
  auto [it, inserted] = cache_.emplace(key, std::make_shared<const Matrix>(std::move(m)));
  return *it->second;
}

std::shared_ptr<const PlaneTable> plane_table(int k, int nodes) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const PlaneTable>> tables;
  std::lock_guard lock(mu);
  auto& slot = tables[{k, nodes}];
  if (!slot) slot = std::make_shared<const PlaneTable>(k, nodes);
  return slot;
}

cplx plane_theta(int k, int j, double x, double y) {
  const auto range = kernels::detail::theta_range(k, y);
  cplx sum = 0.0;
  for (long nu = range.lo; nu <= range.hi; ++nu) {
    if (kernels::detail::wrap(nu, k) != kernels::detail::wrap(j, k)) continue;
    const double nd = static_cast<double>(nu);
    sum += std::exp(-kPi * nd * nd / k - kTwoPi * nd * y) * std::polar(1.0, kTwoPi * nd * x);
  }
  return sum;
}

ThetaBasis::ThetaBasis(const TorusGeometry& geom, int r, int k, BasisOptions options)
    : k_(k), r_(r), d_(geom.dim()) {
  if (k < 1) throw Error("level k must be positive");
  planes_ = geom.planes(r);
  j_ = geom.complex_structure(r);
  omega_ = geom.kahler_form(r).matrix();
  // Positivity of omega_r on each holomorphic plane (omega(e_p, J e_p) > 0).
  for (const auto& pl : planes_)
    if (!(omega_(pl.p, pl.q) > 0.0)) throw Error("polarization is not positive");

  n_ = 1;
  for (std::size_t i = 0; i < planes_.size(); ++i) n_ *= k;

  perm_ = std::move(options.permutation);
  if (perm_.empty())
    for (int a = 0; a < n_; ++a) perm_.push_back(a);
  if (static_cast<int>(perm_.size()) != n_) throw Error("basis permutation has the wrong length");
  std::vector<bool> seen(n_, false);
  for (int p : perm_) {
    if (p < 0 || p >= n_ || seen[p]) throw Error("basis permutation is not a permutation");
    seen[p] = true;
  }
  scale_ = std::move(options.scale);
  if (scale_.empty()) scale_.assign(n_, 1.0);
  if (static_cast<int>(scale_.size()) != n_) throw Error("basis scale has the wrong length");
  for (double s : scale_)
    if (!(s > 0.0)) throw Error("basis scales must be positive");

  const auto table = plane_table(k_, grid_rule(k_, 0));
  gram_ = raw_monomial(Freq{}, *table);
  gram_ = 0.5 * (gram_ + gram_.adjoint()).eval();
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) throw Error("Gram matrix is not positive definite");
  const Matrix l = llt.matrixL();
  c_ = l.adjoint().triangularView<Eigen::Upper>().solve(Matrix::Identity(n_, n_));
}

int ThetaBasis::plane_index(int a, int plane) const {
  const int c = perm_[a];
  return planes_.size() == 1 ? c : (plane == 0 ? c / k_ : c % k_);
}

cplx ThetaBasis::evaluate(int a, std::span<const double> x) const {
  if (a < 0 || a >= n_) throw Error("section index out of range");
  if (static_cast<int>(x.size()) != d_) throw Error("point dimension mismatch");
  cplx v = scale_[a];
  const double norm = std::pow(2.0 * k_, 0.25);
  for (std::size_t i = 0; i < planes_.size(); ++i)
    v *= norm * plane_theta(k_, plane_index(a, static_cast<int>(i)), x[planes_[i].p], x[planes_[i].q]);
  return v;
}

double ThetaBasis::potential(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw Error("point dimension mismatch");
  double phi = 0.0;
  for (const auto& pl : planes_) phi += kTwoPi * k_ * x[pl.q] * x[pl.q];
  return phi;
}

cplx ThetaBasis::multiplier(std::span<const int> lambda, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_ || static_cast<int>(lambda.size()) != d_)
    throw Error("point dimension mismatch");
  // theta(z + m + i n) = exp(pi k n^2 - 2 pi i k n z) theta(z).
  cplx f = 1.0;
  for (const auto& pl : planes_) {
    const double n = lambda[pl.q];
    const cplx z(x[pl.p], x[pl.q]);
    f *= std::exp(cplx(kPi * k_ * n * n, 0.0) - cplx(0.0, kTwoPi * k_ * n) * z);
  }
  return f;
}

Eigen::MatrixXd ThetaBasis::curvature(std::span<const double> x, double h) const {
  if (static_cast<int>(x.size()) != d_) throw Error("point dimension mismatch");
  std::vector<double> y(x.begin(), x.end());
  auto phi_at = [&](int i, double si, int l, double sl) {
    y[i] += si;
    y[l] += sl;
    const double v = potential(y);
    y[i] -= si;
    y[l] -= sl;
    return v;
  };
  Eigen::MatrixXd hess(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int l = 0; l < d_; ++l)
      hess(i, l) = (phi_at(i, h, l, h) - phi_at(i, h, l, -h) - phi_at(i, -h, l, h) + phi_at(i, -h, l, -h)) /
                   (4.0 * h * h);
  // i ddbar phi (u, v) = (H(Ju, v) - H(u, Jv)) / 2.
  const Eigen::MatrixXd jd = j_.cast<double>();
  return 0.5 * (jd.transpose() * hess - hess * jd);
}

int ThetaBasis::gram_rank(double rel_tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rel_tol * ev(ev.size() - 1)) ++rank;
  return rank;
}

double ThetaBasis::gram_condition() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev(ev.size() - 1) / ev(0);
}

Matrix ThetaBasis::raw_monomial(const Freq& m, const PlaneTable& table) const {
  if (table.level() != k_) throw Error("plane table level does not match the basis");
  const double norm = std::sqrt(2.0 * k_);
  const auto& p0 = planes_[0];
  Matrix canonical = norm * table.get(m[p0.p], m[p0.q]);
  for (std::size_t i = 1; i < planes_.size(); ++i)
    canonical = kron2(canonical, norm * table.get(m[planes_[i].p], m[planes_[i].q]));
  return to_basis(canonical);
}

Matrix ThetaBasis::raw_symbol(const FourierSymbol& f, const PlaneTable& table) const {
  if (f.dim() != d_) throw Error("symbol dimension does not match the geometry");
  if (table.level() != k_) throw Error("plane table level does not match the basis");
  const double norm = std::sqrt(2.0 * k_);
  const auto& p0 = planes_[0];
  if (planes_.size() == 1) {
    Matrix canonical = Matrix::Zero(k_, k_);
    for (const auto& t : f.terms()) canonical += t.c * table.get(t.m[p0.p], t.m[p0.q]);
    return to_basis(norm * canonical);
  }
  // Group by the first plane's frequency: sum_m1 P(m1) (x) (sum_m2 c P(m2)).
  const auto& p1 = planes_[1];
  std::map<std::pair<int, int>, Matrix> inner;
  for (const auto& t : f.terms()) {
    auto [it, fresh] = inner.try_emplace({t.m[p0.p], t.m[p0.q]}, Matrix::Zero(k_, k_));
    it->second += t.c * table.get(t.m[p1.p], t.m[p1.q]);
  }
  Matrix canonical = Matrix::Zero(n_, n_);
  for (const auto& [m1, rest] : inner) canonical += kron2(table.get(m1.first, m1.second), rest);
  return to_basis(norm * norm * canonical);
}

Matrix ThetaBasis::to_basis(const Matrix& canonical) const {
  if (canonical.rows() != n_ || canonical.cols() != n_) throw Error("matrix size does not match the basis");
  Matrix out(n_, n_);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) out(a, b) = scale_[a] * scale_[b] * canonical(perm_[a], perm_[b]);
  return out;
}

std::shared_ptr<const ThetaBasis> build_theta_basis(const TorusGeometry& geom, int r, int k) {
  return std::make_shared<const ThetaBasis>(geom, r, k);
}

std::shared_ptr<const ThetaBasis> cached_basis(const TorusGeometry& geom, int r, int k) {
  static std::shared_mutex mu;
  static std::map<std::tuple<std::string, int, int>, std::shared_ptr<const ThetaBasis>> cache;
  const auto key = std::make_tuple(geom.name(), r, k);
  {
    std::shared_lock lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto basis = build_theta_basis(geom, r, k);
  std::unique_lock lock(mu);
  return cache.emplace(key, std::move(basis)).first->second;
}

}  // namespace nambu
