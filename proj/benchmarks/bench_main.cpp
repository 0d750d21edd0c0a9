#include <benchmark/benchmark.h>

#include "twinrank/apps.hpp"
#include "twinrank/core.hpp"
#include "twinrank/runtime.hpp"

namespace {

using namespace twinrank;

State sample_state(std::size_t n) {
  State s;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i) * 0.5;
  s.add("x", v);
  return s;
}

void BM_CanonicalEncode(benchmark::State& st) {
  State s = sample_state(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(canonical_encode(s));
  st.SetBytesProcessed(st.iterations() * st.range(0) * 8);
}
BENCHMARK(BM_CanonicalEncode)->Range(1 << 8, 1 << 18);

void BM_Hash64(benchmark::State& st) {
  Bytes b(static_cast<std::size_t>(st.range(0)), 0x5a);
  for (auto _ : st) benchmark::DoNotOptimize(hash64(b));
  st.SetBytesProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Hash64)->Range(1 << 10, 1 << 22);

// Replicated run against the unreplicated reference: the ratio is the
// measured duplication overhead on one core.
void BM_Replicated(benchmark::State& st, const char* name) {
  auto app = apps::make_app(apps::with_defaults({.name = name}));
  for (auto _ : st) benchmark::DoNotOptimize(runtime::run_detect_only(app, {}).result);
}
void BM_Reference(benchmark::State& st, const char* name) {
  auto app = apps::make_app(apps::with_defaults({.name = name}));
  for (auto _ : st) benchmark::DoNotOptimize(runtime::run_reference(app, {}).result);
}
BENCHMARK_CAPTURE(BM_Replicated, matmul, "matmul")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Reference, matmul, "matmul")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replicated, jacobi, "jacobi")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Reference, jacobi, "jacobi")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replicated, sw, "sw")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Reference, sw, "sw")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
