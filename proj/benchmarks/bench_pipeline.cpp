#include <benchmark/benchmark.h>

#include <filesystem>

#include "qmsdf/dfspaces.hpp"
#include "qmsdf/io.hpp"
#include "qmsdf/models.hpp"
#include "qmsdf/report.hpp"

namespace {

using namespace qmsdf;

GkslGenerator fixture(const char* name)
{
    return load_problem(std::filesystem::path(QMSDF_FIXTURE_DIR) / name).generator();
}

GkslGenerator circulant(Index d, Index n)
{
    CirculantSpec spec;
    spec.d = d;
    spec.n = n;
    return build_circulant(spec);
}

void BM_Lindbladian(benchmark::State& state)
{
    const GkslGenerator gen = circulant(state.range(0), 1);
    for (auto _ : state) benchmark::DoNotOptimize(lindbladian(gen).mat.data());
}
BENCHMARK(BM_Lindbladian)->Arg(4)->Arg(8)->Arg(15)->Unit(benchmark::kMicrosecond);

void BM_Matexp(benchmark::State& state)
{
    const Matrix l = lindbladian(circulant(state.range(0), 1)).mat;
    for (auto _ : state) benchmark::DoNotOptimize(matexp(l, 0.5).data());
}
BENCHMARK(BM_Matexp)->Arg(4)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_DecoherenceFreeSubalgebra(benchmark::State& state)
{
    const GkslGenerator gen = circulant(state.range(0), state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(decoherence_free_subalgebra(gen).size());
}
BENCHMARK(BM_DecoherenceFreeSubalgebra)->Args({4, 2})->Args({8, 2})->Args({15, 10})->Unit(benchmark::kMillisecond);

void BM_FixedPointSpace(benchmark::State& state)
{
    const GkslGenerator gen = circulant(state.range(0), state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(fixed_point_space(gen).basis.size());
}
BENCHMARK(BM_FixedPointSpace)->Args({4, 2})->Args({15, 10})->Unit(benchmark::kMillisecond);

void BM_FullPipeline(benchmark::State& state, const char* name)
{
    const GkslGenerator gen = fixture(name);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(gen, AnalysisOptions{}).nt_dim);
}
BENCHMARK_CAPTURE(BM_FullPipeline, circulant_d4_n2, "circulant_d4_n2.json")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FullPipeline, circulant_d15_n10, "circulant_d15_n10.json")
    ->Unit(benchmark::kMillisecond)
    ->Iterations(2);

} // namespace

BENCHMARK_MAIN();
