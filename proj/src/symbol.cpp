#include "nambu/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include <Eigen/Dense>

namespace nambu {

namespace {

bool freq_less(const Freq& a, const Freq& b) { return a < b; }

Freq negate(const Freq& m) { return {-m[0], -m[1], -m[2], -m[3]}; }

int linf(const Freq& m) {
  int r = 0;
  for (int v : m) r = std::max(r, std::abs(v));
  return r;
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw Error("symbol dimension must be in [1, 4]");
}

struct FreqHash {
  std::size_t operator()(const Freq& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int v : m) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

FourierSymbol::FourierSymbol(int dim) : dim_(dim) { check_dim(dim); }

FourierSymbol::FourierSymbol(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  check_dim(dim);
  for (const auto& t : terms_)
    for (int a = dim_; a < kMaxDim; ++a)
      if (t.m[a] != 0) throw Error("frequency has nonzero entries past the symbol dimension");
  canonicalize();
}

FourierSymbol FourierSymbol::constant(int dim, cplx c) { return FourierSymbol(dim, {{Freq{}, c}}); }

FourierSymbol FourierSymbol::monomial(int dim, const Freq& m, cplx c) { return FourierSymbol(dim, {{m, c}}); }

void FourierSymbol::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return freq_less(a.m, b.m); });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().m == t.m)
      merged.back().c += t.c;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return std::abs(t.c) <= kPruneThreshold; });
  terms_ = std::move(merged);
}

int FourierSymbol::max_freq() const {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, linf(t.m));
  return r;
}

cplx FourierSymbol::coeff(const Freq& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Freq& key) { return freq_less(t.m, key); });
  if (it != terms_.end() && it->m == m) return it->c;
  return 0.0;
}

double FourierSymbol::max_abs_coeff() const {
  double r = 0.0;
  for (const auto& t : terms_) r = std::max(r, std::abs(t.c));
  return r;
}

bool FourierSymbol::is_real(double tol) const {
  for (const auto& t : terms_)
    if (std::abs(coeff(negate(t.m)) - std::conj(t.c)) > tol) return false;
  return true;
}

cplx FourierSymbol::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < dim_) throw Error("evaluation point has too few coordinates");
  cplx sum = 0.0;
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (int a = 0; a < dim_; ++a) phase += t.m[a] * x[a];
    sum += t.c * std::polar(1.0, kTwoPi * phase);
  }
  return sum;
}

FourierSymbol FourierSymbol::conj() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({negate(t.m), std::conj(t.c)});
  return FourierSymbol(dim_, std::move(out));
}

FourierSymbol FourierSymbol::operator-() const {
  FourierSymbol r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

FourierSymbol& FourierSymbol::operator+=(const FourierSymbol& other) {
  if (other.dim_ != dim_) throw Error("symbol dimension mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

FourierSymbol& FourierSymbol::operator-=(const FourierSymbol& other) { return *this += -other; }

FourierSymbol& FourierSymbol::operator*=(cplx s) {
  for (auto& t : terms_) t.c *= s;
  canonicalize();
  return *this;
}

bool operator==(const FourierSymbol& a, const FourierSymbol& b) {
  if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].m != b.terms_[i].m || a.terms_[i].c != b.terms_[i].c) return false;
  return true;
}

FourierSymbol operator+(FourierSymbol a, const FourierSymbol& b) { return a += b; }
FourierSymbol operator-(FourierSymbol a, const FourierSymbol& b) { return a -= b; }
FourierSymbol operator*(cplx s, FourierSymbol a) { return a *= s; }
FourierSymbol operator*(FourierSymbol a, cplx s) { return a *= s; }

FourierSymbol sym_mul_sum(std::span<const SymbolProduct> terms) {
  if (terms.empty()) throw Error("empty sum of products");
  const int dim = terms[0].f->dim();
  int radius = 0;
  std::size_t pairs = 0;
  for (const auto& t : terms) {
    if (t.f->dim() != dim || t.g->dim() != dim) throw Error("symbol dimension mismatch in product");
    radius = std::max(radius, t.f->max_freq() + t.g->max_freq());
    pairs += t.f->size() * t.g->size();
  }
  if (pairs == 0) return FourierSymbol(dim);
  const int side = 2 * radius + 1;
  std::size_t box = 1;
  for (int a = 0; a < dim; ++a) box *= static_cast<std::size_t>(side);

  std::vector<FourierSymbol::Term> out;
  // Dense accumulator when the output box is small next to the pair count,
  // hash map otherwise.
  if (box <= std::max<std::size_t>(4096, 4 * pairs)) {
    std::vector<cplx> acc(box, 0.0);
    std::vector<unsigned char> touched(box, 0);
    auto index = [&](const Freq& m) {
      std::size_t idx = 0;
      for (int a = 0; a < dim; ++a) idx = idx * side + static_cast<std::size_t>(m[a] + radius);
      return idx;
    };
    for (const auto& t : terms)
      for (const auto& a : t.f->terms()) {
        const cplx wa = t.w * a.c;
        for (const auto& b : t.g->terms()) {
          const std::size_t idx = index(Freq{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]});
          acc[idx] += wa * b.c;
          touched[idx] = 1;
        }
      }
    for (std::size_t idx = 0; idx < box; ++idx) {
      if (!touched[idx]) continue;
      Freq m{};
      std::size_t rest = idx;
      for (int a = dim - 1; a >= 0; --a) {
        m[a] = static_cast<int>(rest % side) - radius;
        rest /= side;
      }
      out.push_back({m, acc[idx]});
    }
  } else {
    std::unordered_map<Freq, cplx, FreqHash> acc;
    for (const auto& t : terms)
      for (const auto& a : t.f->terms()) {
        const cplx wa = t.w * a.c;
        for (const auto& b : t.g->terms())
          acc[Freq{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}] += wa * b.c;
      }
    out.reserve(acc.size());
    for (const auto& [m, c] : acc) out.push_back({m, c});
  }
  return FourierSymbol(dim, std::move(out));
}

FourierSymbol sym_mul(const FourierSymbol& f, const FourierSymbol& g) {
  if (f.dim() != g.dim()) throw Error("symbol dimension mismatch in product");
  const SymbolProduct one{1.0, &f, &g};
  return sym_mul_sum({&one, 1});
}

FourierSymbol operator*(const FourierSymbol& f, const FourierSymbol& g) { return sym_mul(f, g); }

FourierSymbol product(std::span<const FourierSymbol> fs) {
  if (fs.empty()) throw Error("empty product");
  FourierSymbol r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = sym_mul(r, fs[i]);
  return r;
}

FourierSymbol partial_derivative(const FourierSymbol& f, int axis) {
  if (axis < 0 || axis >= f.dim()) throw Error("derivative axis out of range");
  std::vector<FourierSymbol::Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms())
    if (t.m[axis] != 0) out.push_back({t.m, t.c * cplx(0.0, kTwoPi * t.m[axis])});
  return FourierSymbol(f.dim(), std::move(out));
}

double coeff_distance(const FourierSymbol& a, const FourierSymbol& b) {
  if (a.dim() != b.dim()) throw Error("symbol dimension mismatch");
  double r = 0.0;
  for (const auto& t : a.terms()) r = std::max(r, std::abs(t.c - b.coeff(t.m)));
  for (const auto& t : b.terms()) r = std::max(r, std::abs(t.c - a.coeff(t.m)));
  return r;
}

std::vector<cplx> evaluate_on_grid(const FourierSymbol& f, int n) {
  if (n < 1) throw Error("grid size must be positive");
  const int dim = f.dim();
  const int radius = f.max_freq();
  const int side = 2 * radius + 1;

  // Coefficient box, then one exponential sum per axis (axis 0 slowest).
  std::vector<int> dims(dim, side);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= side;
  std::vector<cplx> cur(total, 0.0);
  for (const auto& t : f.terms()) {
    std::size_t idx = 0;
    for (int a = 0; a < dim; ++a) idx = idx * side + static_cast<std::size_t>(t.m[a] + radius);
    cur[idx] += t.c;
  }

  std::vector<cplx> table(static_cast<std::size_t>(n) * side);
  for (int j = 0; j < n; ++j)
    for (int s = 0; s < side; ++s)
      table[static_cast<std::size_t>(j) * side + s] =
          std::polar(1.0, kTwoPi * static_cast<double>((s - radius) * static_cast<long>(j) % n) / n);

  for (int axis = 0; axis < dim; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a) outer *= dims[a];
    for (int a = axis + 1; a < dim; ++a) inner *= dims[a];
    std::vector<cplx> next(outer * static_cast<std::size_t>(n) * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (int j = 0; j < n; ++j) {
        cplx* dst = &next[(o * n + j) * inner];
        for (int s = 0; s < side; ++s) {
          const cplx w = table[static_cast<std::size_t>(j) * side + s];
          const cplx* src = &cur[(o * side + s) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
      }
    cur = std::move(next);
    dims[axis] = n;
  }
  return cur;
}

namespace {

struct LocalValue {
  cplx f;
  Eigen::VectorXcd grad;
  Eigen::MatrixXcd hess;
};

LocalValue local_eval(const FourierSymbol& f, const Eigen::VectorXd& x) {
  const int d = f.dim();
  LocalValue v{0.0, Eigen::VectorXcd::Zero(d), Eigen::MatrixXcd::Zero(d, d)};
  for (const auto& t : f.terms()) {
    double phase = 0.0;
    for (int a = 0; a < d; ++a) phase += t.m[a] * x[a];
    const cplx e = t.c * std::polar(1.0, kTwoPi * phase);
    v.f += e;
    for (int a = 0; a < d; ++a) {
      v.grad[a] += e * cplx(0.0, kTwoPi * t.m[a]);
      for (int b = 0; b < d; ++b) v.hess(a, b) += -e * (kTwoPi * t.m[a]) * (kTwoPi * t.m[b]);
    }
  }
  return v;
}

// Newton ascent on |f|^2 with a gradient-step fallback.
double polish_maximum(const FourierSymbol& f, Eigen::VectorXd x) {
  const int d = f.dim();
  double best = std::abs(local_eval(f, x).f);
  for (int it = 0; it < 60; ++it) {
    const LocalValue v = local_eval(f, x);
    Eigen::VectorXd g(d);
    Eigen::MatrixXd h(d, d);
    for (int a = 0; a < d; ++a) {
      g[a] = 2.0 * std::real(std::conj(v.f) * v.grad[a]);
      for (int b = 0; b < d; ++b)
        h(a, b) = 2.0 * std::real(std::conj(v.grad[a]) * v.grad[b] + std::conj(v.f) * v.hess(a, b));
    }
    Eigen::VectorXd step;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.eigenvalues().maxCoeff() < 0.0)
      step = -h.ldlt().solve(g);
    else
      step = g / std::max(1.0, h.norm());
    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const Eigen::VectorXd y = x + t * step;
      const double val = std::abs(local_eval(f, y).f);
      if (val > best) {
        best = val;
        x = y;
        improved = true;
        break;
      }
    }
    if (!improved || t * step.norm() < 1e-14) break;
  }
  return best;
}

double grid_then_polish(const FourierSymbol& f, int n) {
  const int d = f.dim();
  const auto values = evaluate_on_grid(f, n);
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(8, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  double best = std::abs(values[order[0]]);
  for (std::size_t s = 0; s < top; ++s) {
    Eigen::VectorXd x(d);
    std::size_t rest = order[s];
    for (int a = d - 1; a >= 0; --a) {
      x[a] = static_cast<double>(rest % n) / n;
      rest /= n;
    }
    best = std::max(best, polish_maximum(f, x));
  }
  return best;
}

}  // namespace

SupNormEstimate sup_norm_estimate(const FourierSymbol& f, int grid_n) {
  SupNormEstimate est;
  if (f.is_zero()) return est;
  if (f.max_freq() == 0) {
    est.value = std::abs(f.coeff(Freq{}));
    est.grid_n = 1;
    return est;
  }
  int n = std::max({grid_n, 4 * (f.max_freq() + 1), 8});
  double prev = grid_then_polish(f, n);
  est.value = prev;
  est.grid_n = n;
  constexpr double kMaxPoints = 6e6;
  while (std::pow(2.0 * n, f.dim()) <= kMaxPoints) {
    n *= 2;
    const double cur = std::max(prev, grid_then_polish(f, n));
    ++est.refinements;
    est.value = cur;
    est.grid_n = n;
    if (cur - prev < 1e-6) break;
    prev = cur;
  }
  return est;
}

double sup_norm(const FourierSymbol& f, int grid_n) { return sup_norm_estimate(f, grid_n).value; }

FourierSymbol random_symbol(std::uint64_t seed, int dim, int max_freq, bool real_valued) {
  check_dim(dim);
  if (max_freq < 1) throw Error("random_symbol requires max_freq >= 1");
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull);
  const int side = 2 * max_freq + 1;
  const int n_modes = dim <= 2 ? 2 : 3;

  auto disc = [&] {
    const double r = std::sqrt(unit(rng));
    return std::polar(r, kTwoPi * unit(rng));
  };

  std::vector<FourierSymbol::Term> terms;
  const cplx c0 = disc();
  terms.push_back({Freq{}, real_valued ? cplx(c0.real(), 0.0) : c0});

  // Every unit axis mode, then a few sparse extra modes from the frequency box.
  std::vector<Freq> chosen;
  for (int a = 0; a < dim; ++a) {
    Freq m{};
    m[a] = 1;
    chosen.push_back(m);
    if (!real_valued) chosen.push_back(negate(m));
  }
  const std::size_t target = chosen.size() + static_cast<std::size_t>(n_modes);
  int guard = 0;
  while (chosen.size() < target && guard++ < 10000) {
    Freq m{};
    int l1 = 0;
    for (int a = 0; a < dim; ++a) {
      m[a] = static_cast<int>(rng() % side) - max_freq;
      l1 += std::abs(m[a]);
    }
    if (l1 <= 1) continue;
    const bool dup = std::any_of(chosen.begin(), chosen.end(),
                                 [&](const Freq& q) { return q == m || (real_valued && q == negate(m)); });
    if (dup) continue;
    chosen.push_back(m);
  }
  for (const Freq& m : chosen) {
    // Smooth-symbol decay in |m|^2 keeps the unit modes dominant.
    int m2 = 0;
    for (int v : m) m2 += v * v;
    const cplx c = disc() * std::pow(0.5, m2 - 1);
    if (real_valued) {
      terms.push_back({m, 0.5 * c});
      terms.push_back({negate(m), 0.5 * std::conj(c)});
    } else {
      terms.push_back({m, c});
    }
  }
  return FourierSymbol(dim, std::move(terms));
}

FourierSymbol preset_symbol(const std::string& name, int dim) {
  auto axis_of = [&](char ch) {
    const int a = ch - '1';
    if (a < 0 || a >= dim) throw Error("preset '" + name + "' refers to an axis outside the dimension");
    return a;
  };
  auto unit_freq = [&](int a) {
    Freq m{};
    m[a] = 1;
    return m;
  };
  auto cos_axis = [&](int a) {
    return FourierSymbol(dim, {{unit_freq(a), 0.5}, {negate(unit_freq(a)), 0.5}});
  };
  auto sin_axis = [&](int a) {
    return FourierSymbol(dim, {{unit_freq(a), cplx(0.0, -0.5)}, {negate(unit_freq(a)), cplx(0.0, 0.5)}});
  };

  if (name == "one") return FourierSymbol::constant(dim, 1.0);
  if (name.size() == 4) {
    const std::string head = name.substr(0, 3);
    const int a = axis_of(name[3]);
    if (head == "cos") return cos_axis(a);
    if (head == "sin") return sin_axis(a);
    if (head == "exp") return FourierSymbol::monomial(dim, unit_freq(a));
  }
  if (name.size() == 8 && name.substr(0, 3) == name.substr(4, 3)) {
    const std::string head = name.substr(0, 3);
    const int a = axis_of(name[3]);
    const int b = axis_of(name[7]);
    if (head == "cos") return sym_mul(cos_axis(a), cos_axis(b));
    if (head == "sin") return sym_mul(sin_axis(a), sin_axis(b));
  }
  throw Error("unknown symbol preset '" + name + "'");
}

}  // namespace nambu
