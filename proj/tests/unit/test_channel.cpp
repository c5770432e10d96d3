#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ddecc/channel.hpp"
#include "ddecc/error.hpp"
#include "ddecc/gf2.hpp"

using namespace ddecc;

TEST(Bpsk, Definition) {
    EXPECT_EQ(bpsk(Codeword{{0, 0, 0}}), (std::vector<double>{1, 1, 1}));
    EXPECT_EQ(bpsk(Codeword{{1, 0, 1}}), (std::vector<double>{-1, 1, -1}));
}

TEST(Bpsk, RoundTripHamming74) {
    const auto h = builtin_code("hamming74");
    const MlDecoder ml(h, systematic_generator(h));
    for (std::size_t i = 0; i < ml.size(); ++i) EXPECT_EQ(hard_decision(bpsk(ml.codeword(i))), ml.codeword(i));
}

TEST(EbN0, Sigma) {
    EXPECT_NEAR(ebn0_to_sigma({4.0, 0.5}), std::pow(10.0, -0.2), 1e-15);
    EXPECT_NEAR(ebn0_to_sigma({4.0, 0.5}), 0.63096, 1e-5);
    EXPECT_DOUBLE_EQ(ebn0_to_sigma({0.0, 0.5}), 1.0);
    const double s1 = ebn0_to_sigma({3.0, 0.25});
    const double s2 = ebn0_to_sigma({3.0, 0.5});
    EXPECT_NEAR(s2 * s2, s1 * s1 / 2.0, 1e-15);
    EXPECT_THROW(ebn0_to_sigma({3.0, 1.0}), RangeError);
    EXPECT_THROW(ebn0_to_sigma({3.0, 0.0}), RangeError);
}

TEST(Awgn, TinySigmaGivesBpsk) {
    Rng rng(1);
    const Codeword x{{1, 0, 1, 1}};
    const auto out = awgn_transmit(x, 1e-12, rng);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out.y[i], bpsk(x)[i], 1e-10);
    EXPECT_EQ(out.truth.bits, x.bits);
}

TEST(Awgn, MomentsMatch) {
    Rng rng(2);
    const double sigma = 0.7;
    const std::size_t draws = 100000;
    const Codeword x{{0, 1}};
    const auto b = bpsk(x);
    double sum[2] = {0, 0}, sq[2] = {0, 0};
    for (std::size_t d = 0; d < draws; ++d) {
        const auto out = awgn_transmit(x, sigma, rng);
        for (std::size_t i = 0; i < 2; ++i) {
            const double z = out.y[i] - b[i];
            sum[i] += z;
            sq[i] += z * z;
        }
    }
    for (std::size_t i = 0; i < 2; ++i) {
        const double mean = sum[i] / draws;
        EXPECT_LT(std::abs(mean), 4.0 * sigma / std::sqrt(static_cast<double>(draws)));
        EXPECT_NEAR(sq[i] / draws - mean * mean, sigma * sigma, 0.05 * sigma * sigma);
    }
}

TEST(Rayleigh, GainMean) {
    Rng rng(3);
    const double alpha = 1.3;
    const std::size_t draws = 1000000;
    double sum = 0.0;
    for (std::size_t d = 0; d < draws; ++d) sum += rayleigh_sample(alpha, rng);
    const double expected = alpha * std::sqrt(std::numbers::pi / 2.0);
    EXPECT_NEAR(sum / draws, expected, 0.01 * expected);
}

TEST(Rayleigh, UnitGainsReduceToAwgn) {
    const Codeword x{{0, 1, 1}};
    Rng a(9), b(9);
    const std::vector<double> ones(3, 1.0);
    const auto faded = faded_transmit(x, ones, 0.5, a);
    const auto plain = awgn_transmit(x, 0.5, b);
    EXPECT_EQ(faded.y, plain.y);
}

TEST(Rayleigh, VarianceRoughlyTwiceAwgn) {
    // Loose sanity property over the tested SNR range.
    for (double ebn0 : {4.0, 6.0}) {
        const double sigma = ebn0_to_sigma({ebn0, 4.0 / 7.0});
        Rng rng(5);
        const Codeword x{{0}};
        const std::size_t draws = 200000;
        double sum = 0.0, sq = 0.0;
        for (std::size_t d = 0; d < draws; ++d) {
            const double y = rayleigh_transmit(x, sigma, 1.0, rng).y[0];
            sum += y;
            sq += y * y;
        }
        const double mean = sum / draws;
        const double var = sq / draws - mean * mean;
        // Var(h) = (2 - pi/2) for alpha = 1, plus sigma^2.
        const double ratio = var / (sigma * sigma);
        EXPECT_GT(ratio, 1.5 * 0.75) << ebn0;
        EXPECT_LT(ratio, 3.0 * 1.25) << ebn0;
    }
}

TEST(MultiplicativeNoise, Definition) {
    const Codeword x{{0, 0}};
    EXPECT_EQ(multiplicative_noise(x, std::vector<double>{0.5, -0.3}), (std::vector<double>{0.5, -0.3}));
    const Codeword c{{1, 0, 1}};
    EXPECT_EQ(multiplicative_noise(c, bpsk(c)), (std::vector<double>{1, 1, 1}));
    const std::vector<double> y{-0.2, -0.4, 0.9};
    const auto e = multiplicative_noise(c, y);
    const auto b = bpsk(c);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(hard_bit(e[i]) == 1, (y[i] < 0) != (b[i] < 0));
}

TEST(SanitizeZeros, ReplacesExactZerosOnly) {
    std::vector<double> y{0.0, -0.0, -1e-300, 2.0};
    sanitize_zeros(y);
    EXPECT_GT(y[0], 0.0);
    EXPECT_GT(y[1], 0.0);
    EXPECT_LT(y[2], 0.0);
    EXPECT_EQ(y[3], 2.0);
}
