#include <gtest/gtest.h>

#include <cmath>

#include "ddecc/bp.hpp"
#include "ddecc/channel.hpp"
#include "ddecc/error.hpp"

using namespace ddecc;

TEST(TannerGraph, MatchesSupport) {
    const auto h = builtin_code("hamming74");
    const TannerGraph g(h);
    EXPECT_EQ(g.edges(), h.nnz());
    for (std::size_t e = 0; e < g.edges(); ++e) EXPECT_TRUE(h.at(g.edge_check[e], g.edge_var[e]));
    for (std::size_t v = 0; v < 7; ++v) EXPECT_EQ(g.var_edges[v].size(), h.col_support(v).size());
}

TEST(CheckNode, TanhRule) {
    const std::vector<double> in{1.2, -0.4, 2.5, 0.9};
    std::vector<double> out(4);
    check_node_update(in, out);
    for (std::size_t i = 0; i < 4; ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < 4; ++j)
            if (j != i) prod *= std::tanh(in[j] / 2.0);
        EXPECT_NEAR(out[i], 2.0 * std::atanh(prod), 1e-12);
    }
    // Saturated inputs stay finite.
    const std::vector<double> big{60.0, 60.0};
    std::vector<double> o2(2);
    check_node_update(big, o2);
    EXPECT_LE(o2[0], bp_llr_clamp);
    EXPECT_TRUE(std::isfinite(o2[0]));
}

TEST(Bp, NoiselessNeedsNoIterations) {
    const auto h = builtin_code("hamming74");
    const auto out = bp_decode(h, std::vector<double>(7, 1.0), 0.5, 50);
    EXPECT_TRUE(out.converged);
    EXPECT_EQ(out.iters, 0u);
    EXPECT_EQ(out.bits, Bits(7, 0));
}

TEST(Bp, RepetitionPosteriorIsLlrSum) {
    const auto h = builtin_code("rep31");
    const std::vector<double> llr{1.8, -0.4, 0.6};
    BpDecoder bp(h);
    const auto out = bp.decode_llr(llr, 1);
    EXPECT_EQ(out.iters, 1u);
    EXPECT_NEAR(out.posterior[0], 1.8 - 0.4 + 0.6, 1e-12);
    EXPECT_EQ(out.bits, (Bits{0, 0, 0}));
}

TEST(Bp, SingleFlipHighSnrAgreesWithMl) {
    const auto h = builtin_code("hamming74");
    const MlDecoder ml(h, systematic_generator(h));
    BpDecoder bp(h);
    Rng rng(7);
    int agree = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto& c = ml.codeword(rng.below(16));
        auto y = bpsk(Codeword{c});
        for (auto& v : y) v += 0.1 * rng.normal();
        // Channel-like error: conditioned on crossing zero, the overshoot of a
        // N(0, sigma^2) sample past the threshold is close to Exp(mean sigma^2).
        const std::size_t j = rng.below(7);
        const double x = y[j] > 0.0 ? 1.0 : -1.0;
        y[j] = x * 0.01 * std::log(rng.uniform_open_closed());
        if (bp.decode(y, 0.1, 50).bits == ml.decode(y).bits) ++agree;
    }
    EXPECT_GT(agree, 990);
}

TEST(Bp, LengthMismatch) {
    EXPECT_THROW(bp_decode(builtin_code("rep31"), std::vector<double>(4, 1.0), 0.5, 5), ShapeError);
}
