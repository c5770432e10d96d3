#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ddecc/gf2.hpp"
#include "ddecc/rng.hpp"

namespace ddecc {

struct ChannelOutput {
    std::vector<double> y;
    double sigma = 1.0;
    Codeword truth;
};

struct EbN0Point {
    double ebn0_db = 0.0;
    double rate = 0.5;
};

// bit 0 -> +1, bit 1 -> -1.
std::vector<double> bpsk(std::span<const std::uint8_t> bits);
inline std::vector<double> bpsk(const Codeword& x) { return bpsk(x.bits); }

// sigma = (2 * rate * 10^(EbN0/10))^(-1/2).
double ebn0_to_sigma(const EbN0Point& p);

// Replaces exact zeros by +epsilon so the hard decision never depends on sign(0).
void sanitize_zeros(std::span<double> y) noexcept;

ChannelOutput awgn_transmit(const Codeword& x, double sigma, Rng& rng);

// y = h .* bpsk(x) + z with Rayleigh(alpha) gains h and z ~ N(0, sigma^2).
ChannelOutput rayleigh_transmit(const Codeword& x, double sigma, double alpha, Rng& rng);

// Same as rayleigh_transmit with caller-supplied gains; draws only the Gaussian part.
ChannelOutput faded_transmit(const Codeword& x, std::span<const double> gains, double sigma, Rng& rng);

// Rayleigh(alpha) sample by inverse CDF: alpha * sqrt(-2 ln u), u in (0, 1].
inline double rayleigh_sample(double alpha, Rng& rng) {
    return alpha * std::sqrt(-2.0 * std::log(rng.uniform_open_closed()));
}

// Multiplicative noise: y = bpsk(x) .* eps_tilde, so eps_tilde = y .* bpsk(x).
std::vector<double> multiplicative_noise(const Codeword& x, std::span<const double> y);

}  // namespace ddecc
