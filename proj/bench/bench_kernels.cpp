// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "wehrl/geometry.hpp"
#include "wehrl/measure.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/state_space.hpp"

using namespace wehrl;

namespace {

void BM_EntropyMC(benchmark::State& st) {
  const Params P(2, static_cast<int>(st.range(0)));
  const auto X = random_state(P, 1);
  const auto phi = pow_phi(2);
  const QuadratureScheme s = MonteCarlo{100000, 3};
  for (auto _ : st) benchmark::DoNotOptimize(entropy_G(X, phi, s).value);
}

void BM_EntropyMCSerial(benchmark::State& st) {
  const Params P(2, static_cast<int>(st.range(0)));
  const auto X = random_state(P, 1);
  const auto phi = pow_phi(2);
  const QuadratureScheme s = MonteCarlo{100000, 3};
  for (auto _ : st) benchmark::DoNotOptimize(entropy_G_reference(X, phi, s).value);
}

void BM_EntropyTensor(benchmark::State& st) {
  const Params P(1, static_cast<int>(st.range(0)));
  const auto X = random_state(P, 1);
  const auto phi = pow_phi(2);
  const EntropyEvaluator G(P, default_tensor(P));
  for (auto _ : st) benchmark::DoNotOptimize(G(X, phi).value);
}

void BM_EntropyTensorSerial(benchmark::State& st) {
  const Params P(1, static_cast<int>(st.range(0)));
  const auto X = random_state(P, 1);
  const auto phi = pow_phi(2);
  const QuadratureScheme s = default_tensor(P);
  for (auto _ : st) benchmark::DoNotOptimize(entropy_G_reference(X, phi, s).value);
}

void BM_HusimiSup(benchmark::State& st) {
  const Params P(2, static_cast<int>(st.range(0)));
  const auto X = random_state(P, 5);
  for (auto _ : st) benchmark::DoNotOptimize(husimi_sup(X).T);
}

void BM_HusimiSupSerial(benchmark::State& st) {
  const Params P(2, static_cast<int>(st.range(0)));
  const auto X = random_state(P, 5);
  for (auto _ : st) benchmark::DoNotOptimize(husimi_sup_serial(X).T);
}

}  // namespace

BENCHMARK(BM_EntropyMC)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntropyMCSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntropyTensor)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EntropyTensorSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_HusimiSup)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HusimiSupSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
