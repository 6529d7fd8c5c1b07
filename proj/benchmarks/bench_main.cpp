#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rician/batch.hpp"
#include "rician/density.hpp"
#include "rician/numerics.hpp"
#include "rician/rng.hpp"

namespace {

void BM_LogBesselI(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rician::log_bessel_i(order, x));
    x = x < 400.0 ? x * 1.37 : 0.5;
  }
}
BENCHMARK(BM_LogBesselI)->Arg(0)->Arg(1)->Arg(11)->Arg(83);

// Arguments as they occur in the sampler at 6 dB.
void BM_LogG(benchmark::State& state) {
  const int n_c = static_cast<int>(state.range(0));
  const double kappa = static_cast<double>(state.range(1));
  const auto params = rician::derive_params(kappa, 6.0, 168, 168 / n_c);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<rician::cdouble> noise(static_cast<std::size_t>(n_c));
  std::vector<rician::cdouble> pool(4096 * noise.size());
  for (auto& w : pool) w = {g(rng), g(rng)};
  std::size_t offset = 0;
  for (auto _ : state) {
    std::copy_n(pool.begin() + static_cast<std::ptrdiff_t>(offset), noise.size(), noise.begin());
    offset = (offset + noise.size()) % pool.size();
    benchmark::DoNotOptimize(rician::sample_info_density(params, noise));
  }
}
BENCHMARK(BM_LogG)->Args({2, 0})->Args({12, 0})->Args({84, 0})->Args({12, 10})->Args({84, 1000});

void BM_DrawSum(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  const auto params = rician::derive_params(1.0, 6.0, 168, ell);
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rician::draw_sum(params, rician::PilotConfig{}, 7, index++));
  }
}
BENCHMARK(BM_DrawSum)->Arg(2)->Arg(14)->Arg(84);

}  // namespace

BENCHMARK_MAIN();
