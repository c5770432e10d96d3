#include <benchmark/benchmark.h>

#include "ddecc/bp.hpp"
#include "ddecc/channel.hpp"
#include "ddecc/decode.hpp"
#include "ddecc/gf2.hpp"

using namespace ddecc;

namespace {

// First channel output with a nonzero syndrome, so decoders have work to do.
std::vector<double> noisy_word(const ParityCheckMatrix& h, double ebn0, std::uint64_t seed) {
    Rng rng(seed);
    const auto g = systematic_generator(h);
    const double sigma = ebn0_to_sigma({ebn0, h.rate()});
    while (true) {
        Bits msg(g.k());
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng.below(2));
        auto y = awgn_transmit(encode(g, msg), sigma, rng).y;
        if (syndrome(h, y).weight > 0) return y;
    }
}

void BM_Syndrome(benchmark::State& state) {
    const auto h = builtin_code("hamming74");
    const auto y = noisy_word(h, 2.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(syndrome(h, y).weight);
}
BENCHMARK(BM_Syndrome);

void BM_MlDecode(benchmark::State& state) {
    const auto h = builtin_code("hamming74");
    const MlDecoder ml(h, systematic_generator(h));
    const auto y = noisy_word(h, 2.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ml.decode_index(y));
}
BENCHMARK(BM_MlDecode);

void BM_BpDecode(benchmark::State& state) {
    const auto h = builtin_code("hamming74");
    BpDecoder bp(h);
    const double sigma = ebn0_to_sigma({2.0, h.rate()});
    const auto y = noisy_word(h, 2.0, 3);
    const auto iters = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bp.decode(y, sigma, iters).iters);
}
BENCHMARK(BM_BpDecode)->Arg(5)->Arg(50);

void BM_ModelForward(benchmark::State& state) {
    const auto h = builtin_code("hamming74");
    const auto backbone = state.range(0) ? nn::Backbone::masked_attention : nn::Backbone::mlp;
    const nn::DenoiserModel model(h, nn::ArchConfig{backbone, 32, 2, 1, 0}, 4);
    const auto y = noisy_word(h, 2.0, 4);
    const auto in = nn::preprocess(y, h);
    for (auto _ : state) benchmark::DoNotOptimize(model.forward(in.features, in.parity_errors));
}
BENCHMARK(BM_ModelForward)->Arg(0)->Arg(1);

void BM_Decode(benchmark::State& state) {
    const auto h = builtin_code("hamming74");
    const nn::DenoiserModel model(h, nn::ArchConfig{}, 5);
    const auto sched = NoiseSchedule::for_code(h);
    const auto y = noisy_word(h, 1.0, 6);
    DecodeConfig cfg;
    cfg.mode = state.range(0) ? DecodeMode::line_search : DecodeMode::regular;
    for (auto _ : state) benchmark::DoNotOptimize(decode(model, h, sched, y, cfg).iters_used);
}
BENCHMARK(BM_Decode)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
