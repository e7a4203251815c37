#include "hld/io.hpp"
#include "hld/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hld;

namespace {

ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> dist(-99, 99);
    ExactMatrix m(Ring::integers(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, Scalar(dist(rng)));
    return m;
}

void BM_MultiplySerial(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    ExactMatrix a = random_matrix(rng, n), b = random_matrix(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply_serial(a, b));
}

void BM_MultiplyParallel(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    ExactMatrix a = random_matrix(rng, n), b = random_matrix(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply_parallel(a, b));
}

struct Decomposed {
    Instance instance;
    DecompositionCertificate certificate;
};

Decomposed decomposed(std::uint64_t seed) {
    Instance inst = generate_instance(random_profile(seed, Ring::integers(), 3, 8, 24));
    DecompositionCertificate cert = lefschetz_decompose(inst.data);
    return {inst, cert};
}

void BM_VerifySerial(benchmark::State& state) {
    Decomposed d = decomposed(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(d.instance.complex(), d.certificate, false));
}

void BM_VerifyParallel(benchmark::State& state) {
    Decomposed d = decomposed(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(d.instance.complex(), d.certificate, true));
}

} // namespace

BENCHMARK(BM_MultiplySerial)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MultiplyParallel)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VerifySerial)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyParallel)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
