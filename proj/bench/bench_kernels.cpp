#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "nambu/kernels.hpp"

using namespace nambu;

namespace {

Matrix rand_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

// A Kronecker sum shaped like the tensor-product residuals: N_i = k^2.
KronSum make_sum(int k, int terms) {
  std::mt19937_64 rng(17);
  const Eigen::Index n = static_cast<Eigen::Index>(k) * k;
  KronSum x({n, n, n});
  for (int t = 0; t < terms; ++t) x.add(1.0, share(rand_matrix(rng, n)), share(rand_matrix(rng, n)), share(rand_matrix(rng, n)));
  return x;
}

template <bool Reference>
void BM_KronApply(benchmark::State& state) {
  const auto x = make_sum(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::vector<cplx> in(x.size(), cplx(1.0, 0.5)), out(x.size());
  for (auto _ : state) {
    if constexpr (Reference)
      kernels::kron_apply_reference(x, in.data(), out.data());
    else
      kernels::kron_apply(x, in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * x.size());
}

template <bool Reference>
void BM_PlaneMonomial(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n_g = 8 * k + 8;
  for (auto _ : state) {
    Matrix p = Reference ? kernels::plane_monomial_reference(k, n_g, 1, -2) : kernels::plane_monomial(k, n_g, 1, -2);
    benchmark::DoNotOptimize(p.data());
  }
}

}  // namespace

BENCHMARK(BM_KronApply<true>)->Args({3, 8})->Args({4, 24})->Args({6, 24})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KronApply<false>)->Args({3, 8})->Args({4, 24})->Args({6, 24})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlaneMonomial<true>)->Arg(4)->Arg(12)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PlaneMonomial<false>)->Arg(4)->Arg(12)->Arg(32)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
